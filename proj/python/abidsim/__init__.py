"""Prior-free auto-bidding auction laboratory.

Thin package wrapper around the compiled ``_abidsim`` extension. The
extension lives inside the package in an installed wheel; in a raw build
tree it sits next to the package on ``PYTHONPATH``.
"""

try:
    from ._abidsim import *  # noqa: F401,F403
    from ._abidsim import __doc__  # noqa: F401
except ImportError:  # build-tree layout
    from _abidsim import *  # noqa: F401,F403
    from _abidsim import __doc__  # noqa: F401
