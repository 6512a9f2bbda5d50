"""
Analysis pipeline.

Runs structural verification, the ucp multiplicative domain, the chain and
stabilizing algebra, peripheral spectrum verdicts and the code structures
for one channel, and collects everything into an AnalysisReport.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

import config
from .channel import KrausChannel, superop
from .errors import ERROR_NOT_UNITAL_TP, PreconditionError
from .linalg import Tolerance
from .multdom import is_normal, mult_chain, stabilizing_algebra, verify_automorphism
from .qec import ns_codes, ucc_codes, ucs_vs_uns, uns_codes
from .spectral import (cyclic_group_check, is_irreducible, is_primitive, peripheral_eigenpairs,
                       spectral_radius)
from .staralg import wedderburn
from .ucp import mult_domain_ucp, stinespring


@dataclass
class AnalysisReport:
    """
    Everything computed for one channel.

    :param input: Echo of the input (builtin spec or file)
    :param tolerances: Tolerances in effect
    :param sections: Named result sections
    :param warnings: Numerical notes gathered along the way
    :param error: Precondition message when an analysis had to be skipped
    """

    input: Dict[str, Any]
    tolerances: Dict[str, float]
    sections: Dict[str, Any] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)
    error: Optional[str] = None

    def add_warnings(self, notes) -> None:
        for note in notes:
            if note not in self.warnings:
                self.warnings.append(note)

    def to_dict(self) -> dict:
        data: Dict[str, Any] = {'input': self.input, 'tolerances': self.tolerances}
        data.update(self.sections)
        data['warnings'] = list(self.warnings)
        if self.error is not None:
            data['error'] = self.error
        return data

    def table(self) -> str:
        """Plain text rendering for --format table."""
        lines = ["=" * 60, "📊 CHANNEL ANALYSIS", "=" * 60]
        source = self.input.get('builtin') or self.input.get('file') or 'inline'
        lines.append(f"Input: {source}")
        for name, section in self.sections.items():
            lines.append("")
            lines.append(f"[{name}]")
            lines.extend(_table_lines(section, indent=2))
        if self.error:
            lines.append("")
            lines.append(f"❌ {self.error}")
        if self.warnings and getattr(config, 'SHOW_WARNINGS', True):
            lines.append("")
            lines.append("⚠️  Warnings:")
            lines.extend(f"  - {w}" for w in self.warnings)
        return "\n".join(lines)


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, (list, tuple)) and value and all(isinstance(v, float) for v in value):
        return "[" + ", ".join(f"{v:.6g}" for v in value) + "]"
    return str(value)


def _table_lines(section: Any, indent: int) -> List[str]:
    pad = " " * indent
    if not isinstance(section, dict):
        return [pad + _format_value(section)]
    lines = []
    for key, value in section.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_table_lines(value, indent + 2))
        else:
            lines.append(f"{pad}{key:24s} {_format_value(value)}")
    return lines


class ChannelAnalyzer:
    """
    Orchestrates the analyses for the command line.

    Holds the tolerances and the seed used for randomized steps (Wedderburn
    generic elements), so repeated runs give identical reports.
    """

    def __init__(self, tol: Optional[Tolerance] = None, seed: Optional[int] = None) -> None:
        """
        :param tol: Tolerances (config defaults when omitted)
        :param seed: Seed for randomized steps
        """
        self.tol: Tolerance = tol or Tolerance.from_config()
        self.seed: int = seed if seed is not None else getattr(config, 'DEFAULT_SEED', 1234)

    def _rng(self) -> np.random.Generator:
        return np.random.default_rng(seed=self.seed)

    def _new_report(self, echo: Dict[str, Any]) -> AnalysisReport:
        return AnalysisReport(input=echo, tolerances={
            'rank_eps': self.tol.rank_eps,
            'eig_eps': self.tol.eig_eps,
            'residual_eps': self.tol.residual_eps,
        })

    def _structure(self, ch: KrausChannel, report: AnalysisReport) -> None:
        report.sections['dim'] = ch.dim
        report.sections['n_kraus'] = ch.n_kraus
        report.sections['flags'] = ch.flags.to_dict()

    def _ucp(self, ch: KrausChannel, report: AnalysisReport) -> None:
        if not ch.flags.unital:
            report.sections['ucp'] = {'skipped': 'map is not unital'}
            return
        data = stinespring(ch, self.tol)
        domain = mult_domain_ucp(ch, self.tol)
        report.add_warnings(domain.warnings)
        report.sections['ucp'] = {
            'mult_domain_dim': domain.dimension,
            'dilation_dim': int(data.min_basis.shape[1]),
            'isometry_residual': data.isometry_residual,
            'reconstruction_residual': data.reconstruction_residual,
        }

    def _require_tp(self, ch: KrausChannel, report: AnalysisReport) -> bool:
        if ch.is_unital_tp:
            return True
        report.error = ERROR_NOT_UNITAL_TP.format(tp=ch.flags.tp_residual, unital=ch.flags.unital_residual)
        return False

    def _chain(self, ch: KrausChannel, report: AnalysisReport) -> None:
        chain = mult_chain(ch, tol=self.tol)
        report.add_warnings(chain.warnings)
        stable = stabilizing_algebra(ch, self.tol, chain=chain)
        report.add_warnings(stable.warnings)
        structure = wedderburn(stable, self.tol, self._rng())
        automorphism = verify_automorphism(ch, stable, self.tol)
        report.sections['chain'] = {
            'dims': chain.chain_dims,
            'kappa': chain.kappa,
            'normal': chain.normal,
            'normality_residual': superop(ch).normality_residual(),
        }
        report.sections['stabilizing_algebra'] = {
            'dim': stable.dimension,
            'blocks': [list(b) for b in structure.blocks],
            'automorphism': automorphism.to_dict(),
        }

    def _spectrum(self, ch: KrausChannel, report: AnalysisReport) -> None:
        pd = peripheral_eigenpairs(ch, self.tol)
        report.add_warnings(pd.warnings)
        section = pd.to_dict(self.tol.cluster_eps)
        section['spectral_radius'] = spectral_radius(ch)
        report.sections['peripheral'] = section

        verdict = is_irreducible(ch, self.tol)
        verdicts = {
            'irreducible': verdict.irreducible,
            'fixed_dim': verdict.fixed_dim,
            'primitive': is_primitive(ch, self.tol),
            'normal': is_normal(ch, self.tol),
        }
        if verdict.irreducible:
            verdicts['cyclic_group'] = cyclic_group_check(pd, self.tol)
        report.sections['verdicts'] = verdicts

    def _qec(self, ch: KrausChannel, report: AnalysisReport) -> None:
        ucc = ucc_codes(ch, self.tol)
        uns = uns_codes(ch, self.tol)
        ns = ns_codes(ch, self.tol)
        comparison = ucs_vs_uns(ch, self.tol)
        report.sections['qec'] = {
            'ucc': ucc.to_dict(),
            'uns': uns.to_dict(),
            'ns': ns.to_dict(),
            'kappa_one_equivalence': comparison['equal'],
            'uns_in_ucc': comparison['uns_in_ucc'],
        }
        if comparison['witness'] is not None:
            report.sections['qec']['witness_residual'] = comparison['witness_residual']

    def analyze(self, ch: KrausChannel, echo: Optional[Dict[str, Any]] = None) -> AnalysisReport:
        """
        Full report; analyses needing a unital TP channel are skipped with an error.

        :param ch: Channel
        :param echo: Input description
        :return: AnalysisReport
        """
        report = self._new_report(echo or {})
        self._structure(ch, report)
        self._ucp(ch, report)
        if not self._require_tp(ch, report):
            return report
        if config.DEBUG:
            print(f"🔍 Analyzing d={ch.dim} channel with {ch.n_kraus} Kraus operators")
        self._chain(ch, report)
        self._spectrum(ch, report)
        self._qec(ch, report)
        return report

    def spectrum(self, ch: KrausChannel, echo: Optional[Dict[str, Any]] = None) -> AnalysisReport:
        report = self._new_report(echo or {})
        self._structure(ch, report)
        if self._require_tp(ch, report):
            self._spectrum(ch, report)
        return report

    def codes(self, ch: KrausChannel, echo: Optional[Dict[str, Any]] = None) -> AnalysisReport:
        report = self._new_report(echo or {})
        self._structure(ch, report)
        if self._require_tp(ch, report):
            report.sections['chain'] = {'kappa': mult_chain(ch, tol=self.tol).kappa}
            self._qec(ch, report)
        return report


def ensure_unital_tp(report: AnalysisReport) -> None:
    """
    Raise the precondition recorded in a partial report.

    :param report: Report from ChannelAnalyzer
    """
    if report.error is not None:
        raise PreconditionError(report.error, residual_name='unital_tp')
