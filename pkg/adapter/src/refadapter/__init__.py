"""Stock-routine numerical backend for the audit wire protocol.

Every operation here delegates to numpy or scipy exactly as shipped; the
package adds nothing numerical of its own. It exists so the audit
harness has a real cross-process target whose answers come from a
mainstream scientific stack rather than from the harness's host kernels.
"""

from .kernels import CAPABILITIES, DIST_FAMILIES
from .server import PROTOCOL_VERSION, main, serve

__all__ = [
    "CAPABILITIES",
    "DIST_FAMILIES",
    "PROTOCOL_VERSION",
    "main",
    "serve",
]

__version__ = "0.1.0"
