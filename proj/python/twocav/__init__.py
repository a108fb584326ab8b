"""Dissipative dynamics, dark states and entanglement of two cavities
coupled to a common Markovian environment.

The heavy lifting lives in the compiled extension ``twocav._core``; this
package re-exports its public surface.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
