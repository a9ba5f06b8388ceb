"""Joint test/misclassification cost analysis over feature configurations."""

try:
    from ._jroc import *  # noqa: F401,F403
    from ._jroc import __doc__  # noqa: F401
except ImportError:  # in-tree build: the extension sits next to the build outputs
    from _jroc import *  # noqa: F401,F403
