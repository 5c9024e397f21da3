try:
    from flpline._flp import *  # noqa: F401,F403
except ImportError:  # module built next to this package, not inside it
    from _flp import *  # noqa: F401,F403
