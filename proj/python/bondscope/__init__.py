"""Topological classification of local atomic environments in bond networks."""

try:
    from ._bondscope import *  # noqa: F401,F403
    from ._bondscope import __doc__  # noqa: F401
except ImportError:  # build tree: the extension sits next to the package, not inside it
    from _bondscope import *  # noqa: F401,F403

DESCRIPTORS = (
    "coordination",
    "shell-count",
    "primitive-rings",
    "h1-barcode",
    "graph-iso",
    "primitive-cluster",
)
