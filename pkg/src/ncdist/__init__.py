"""Spectral and Lorentzian distances from algebraic and order data.

Subpackages by topic:

- :mod:`ncdist.linalg` -- hermitian eigensolver, operator norm, ``|A|``
- :mod:`ncdist.spectral` -- finite spectral triples and the Connes distance
- :mod:`ncdist.causet` -- sprinkled causal sets, links, heaviest chains
- :mod:`ncdist.lorentz` -- dilatation distance, null collapse, Cauchy surfaces
- :mod:`ncdist.order` -- posets, isotone functions, hermitian meet/join
- :mod:`ncdist.krein` -- indefinite inner products and Krein adjoints
"""
from ncdist._kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
