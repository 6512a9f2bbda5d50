"""
Test the analysis pipeline, batch runner and spectrum plot
"""
import pytest

import config
from src import builders
from src.analyzer import AnalysisReport, ChannelAnalyzer, ensure_unital_tp
from src.batch_runner import BatchAnalyzer
from src.errors import PreconditionError
from src.spectrum_plot import save_spectrum_plot, spectrum_figure
from src.ucp import counterexample_phi


@pytest.fixture
def analyzer(tol):
    return ChannelAnalyzer(tol, seed=5)


def test_analyze_fourier(analyzer):
    report = analyzer.analyze(builders.fourier_example(3), {'builtin': 'builtin:fourier/3'})
    data = report.to_dict()

    assert report.error is None
    assert data['dim'] == 3
    assert data['chain']['dims'] == [3, 1]
    assert data['chain']['kappa'] == 2
    assert not data['chain']['normal']
    assert data['stabilizing_algebra']['dim'] == 1
    assert data['stabilizing_algebra']['automorphism']['passed']
    assert data['verdicts']['primitive']
    assert data['verdicts']['irreducible']
    assert data['qec']['ucc']['algebra_dim'] == 3
    assert data['qec']['kappa_one_equivalence'] is False
    assert 'witness_residual' in data['qec']
    assert data['ucp']['mult_domain_dim'] == 3


def test_analyze_shift_reports_cyclic_group(analyzer):
    data = analyzer.analyze(builders.cyclic_shift_channel(3)).to_dict()

    assert data['peripheral']['group_order'] == 3
    assert data['verdicts']['cyclic_group']['passed']
    assert data['peripheral']['spectral_radius'] == pytest.approx(1.0)
    assert data['qec']['kappa_one_equivalence'] is True


def test_analyze_non_tp_map(analyzer):
    report = analyzer.analyze(counterexample_phi())
    data = report.to_dict()

    assert data['error'].startswith("channel must be unital and trace preserving")
    assert data['ucp']['mult_domain_dim'] >= 2
    assert 'chain' not in data
    with pytest.raises(PreconditionError):
        ensure_unital_tp(report)


def test_analyze_non_unital_map(analyzer, tol):
    from src.channel import KrausChannel

    data = analyzer.analyze(KrausChannel.from_kraus([[[1, 0], [0, 0]], [[0, 1], [0, 0]]], tol)).to_dict()

    assert data['ucp'] == {'skipped': 'map is not unital'}
    assert 'error' in data


def test_spectrum_and_codes_modes(analyzer):
    spectrum = analyzer.spectrum(builders.projective_channel()).to_dict()
    codes = analyzer.codes(builders.kappa3_example()).to_dict()

    assert not spectrum['verdicts']['irreducible']
    assert spectrum['verdicts']['fixed_dim'] == 2
    assert 'qec' not in spectrum
    assert codes['chain'] == {'kappa': 3}
    assert codes['qec']['uns']['algebra_dim'] == 1


def test_report_table(analyzer, monkeypatch):
    report = analyzer.analyze(builders.projective_channel(), {'builtin': 'builtin:projective'})
    report.add_warnings(["borderline rank", "borderline rank"])

    table = report.table()

    assert "CHANNEL ANALYSIS" in table
    assert "Input: builtin:projective" in table
    assert "[chain]" in table
    assert table.count("borderline rank") == 1

    monkeypatch.setattr(config, 'SHOW_WARNINGS', False)
    assert "borderline rank" not in report.table()


def test_report_dict_layout():
    report = AnalysisReport(input={'file': 'x.json'}, tolerances={'rank_eps': 1e-10})
    report.sections['dim'] = 2

    assert list(report.to_dict()) == ['input', 'tolerances', 'dim', 'warnings']


def test_batch_keeps_input_order(analyzer, monkeypatch):
    monkeypatch.setattr(config, 'MAX_THREADS', 2)
    sources = ['builtin:shift/2', 'builtin:nope', 'builtin:fourier/3', 'builtin:counterexample']

    results = BatchAnalyzer(analyzer, 'spectrum').run(sources)

    assert [r.source for r in results] == sources
    assert results[0].ok
    assert results[1].exception is not None and not results[1].ok
    assert results[2].report.sections['verdicts']['primitive']
    assert results[3].report.error is not None and not results[3].ok


def test_batch_sequential(analyzer, monkeypatch):
    monkeypatch.setattr(config, 'USE_THREADING', False)

    results = BatchAnalyzer(analyzer, 'codes').run(['builtin:projective', 'builtin:kappa3'])

    assert all(r.ok for r in results)


def test_spectrum_plot(tmp_path):
    path = save_spectrum_plot(builders.cyclic_shift_channel(3), tmp_path / 'spectrum.png')

    assert path.exists()
    assert path.stat().st_size > 0

    fig = spectrum_figure(builders.fourier_example(3))
    assert "1 peripheral" in fig.axes[0].get_title()
