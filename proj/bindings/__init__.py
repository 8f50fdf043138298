from ._growlsm import *  # noqa: F401,F403
