"""
Spectrum plot.

Draws every eigenvalue of the superoperator in the complex plane together
with the unit circle, peripheral eigenvalues highlighted. File output only.
"""

from pathlib import Path
from typing import Optional, Union

import numpy as np
import matplotlib
import matplotlib.pyplot as plt
from matplotlib.figure import Figure

import config
from .channel import KrausChannel, superop
from .linalg import Tolerance, eig


matplotlib.use('Agg')  # No display needed


def spectrum_figure(ch: KrausChannel, tol: Optional[Tolerance] = None) -> Figure:
    """
    Build the spectrum figure.

    :param ch: Channel
    :param tol: Tolerances
    :return: Matplotlib figure (caller closes it)
    """
    tol = tol or ch.tol
    values = eig(superop(ch).matrix, tol)[0]
    peripheral = np.abs(values) >= 1 - tol.eig_eps

    fig, ax = plt.subplots(figsize=getattr(config, 'PLOT_SIZE', (6, 6)))
    theta = np.linspace(0, 2 * np.pi, 400)
    ax.plot(np.cos(theta), np.sin(theta), color='gray', linewidth=1, label='unit circle')
    ax.scatter(values[~peripheral].real, values[~peripheral].imag, s=25, color='tab:blue',
               label='inner spectrum')
    ax.scatter(values[peripheral].real, values[peripheral].imag, s=60, color='tab:red',
               marker='o', facecolors='none', linewidths=1.5, label='peripheral')

    ax.set_aspect('equal')
    ax.set_xlim(-1.15, 1.15)
    ax.set_ylim(-1.15, 1.15)
    ax.axhline(0, color='lightgray', linewidth=0.5)
    ax.axvline(0, color='lightgray', linewidth=0.5)
    ax.set_xlabel('Re')
    ax.set_ylabel('Im')
    ax.set_title(f'Superoperator spectrum (d={ch.dim}, {int(peripheral.sum())} peripheral)',
                 fontsize=11, fontweight='bold')
    ax.legend(loc='lower left', fontsize=8)
    fig.tight_layout()
    return fig


def save_spectrum_plot(ch: KrausChannel, path: Union[str, Path], tol: Optional[Tolerance] = None) -> Path:
    """
    Write the spectrum figure to a file (format from the suffix).

    :param ch: Channel
    :param path: Output path
    :param tol: Tolerances
    :return: Path written
    """
    path = Path(path)
    fig = spectrum_figure(ch, tol)
    try:
        fig.savefig(path, dpi=getattr(config, 'PLOT_DPI', 120))
    finally:
        plt.close(fig)
    if config.DEBUG:
        print(f"📊 Spectrum plot saved to {path}")
    return path
