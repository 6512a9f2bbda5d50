"""
Batch analysis.

Analyzes several inputs in worker threads. Each job works on its own
immutable channel; results come back in input order so that emission
stays serialized in the caller.
"""

import multiprocessing as mp
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import config
from .analyzer import AnalysisReport, ChannelAnalyzer
from .errors import ChannelError
from .wire import read_input


@dataclass
class BatchResult:
    """
    Outcome of one input.

    :param source: Input path or builtin name
    :param report: Report, when the input could be read
    :param exception: Error raised while reading or analyzing
    """

    source: str
    report: Optional[AnalysisReport] = None
    exception: Optional[Exception] = None

    @property
    def ok(self) -> bool:
        return self.exception is None and self.report is not None and self.report.error is None


class BatchAnalyzer:
    """
    Runs ChannelAnalyzer over many inputs.

    Uses a thread pool when config.USE_THREADING is on and there is more
    than one input, otherwise runs sequentially.
    """

    def __init__(self, analyzer: ChannelAnalyzer, mode: str = 'analyze') -> None:
        """
        :param analyzer: Analyzer carrying tolerances and seed
        :param mode: 'analyze', 'spectrum' or 'codes'
        """
        self.analyzer: ChannelAnalyzer = analyzer
        self.job: Callable = getattr(analyzer, mode)
        self.use_threading: bool = getattr(config, 'USE_THREADING', True)
        max_threads = getattr(config, 'MAX_THREADS', None)
        self.max_workers: int = max_threads if max_threads else mp.cpu_count()

    def _run_one(self, source: str) -> BatchResult:
        try:
            ch, echo = read_input(source, self.analyzer.tol)
            return BatchResult(source, report=self.job(ch, echo))
        except ChannelError as e:
            if config.DEBUG:
                print(f"⚠️  {source}: {e}")
            return BatchResult(source, exception=e)

    def run(self, sources: Sequence[str]) -> List[BatchResult]:
        """
        Analyze every source.

        :param sources: Paths or builtin names
        :return: Results in input order
        """
        if not self.use_threading or len(sources) < 2:
            return [self._run_one(s) for s in sources]
        workers = min(self.max_workers, len(sources))
        if config.DEBUG:
            print(f"⚡ Analyzing {len(sources)} inputs on {workers} threads")
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(self._run_one, sources))
