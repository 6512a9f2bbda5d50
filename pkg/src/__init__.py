"""
Channel Kappa - multiplicative domains of unital quantum channels
Main package with analysis modules
"""

__version__ = "1.0.1"
__author__ = "Channel Kappa Team"

from .linalg import OperatorSubspace, Tolerance
from .channel import KrausChannel, Superoperator, ChoiMatrix, superop, choi, adjoint, compose
from .staralg import StarAlgebraStructure, commutant, fixed_point_algebra, wedderburn
from .multdom import mult_domain, mult_chain, stabilizing_algebra, MultChainResult
from .spectral import is_irreducible, is_primitive, peripheral_eigenpairs
from .ucp import mult_domain_ucp, density_perturbation
from .qec import ucc_codes, uns_codes, ns_codes, CodeStructure
from .analyzer import ChannelAnalyzer, AnalysisReport

__all__ = [
    'OperatorSubspace',
    'Tolerance',
    'KrausChannel',
    'Superoperator',
    'ChoiMatrix',
    'superop',
    'choi',
    'adjoint',
    'compose',
    'StarAlgebraStructure',
    'commutant',
    'fixed_point_algebra',
    'wedderburn',
    'mult_domain',
    'mult_chain',
    'stabilizing_algebra',
    'MultChainResult',
    'is_irreducible',
    'is_primitive',
    'peripheral_eigenpairs',
    'mult_domain_ucp',
    'density_perturbation',
    'ucc_codes',
    'uns_codes',
    'ns_codes',
    'CodeStructure',
    'ChannelAnalyzer',
    'AnalysisReport',
]
