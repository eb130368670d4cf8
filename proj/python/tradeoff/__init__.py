from ._tradeoff import *  # noqa: F401,F403
from ._tradeoff import __doc__  # noqa: F401
