import os
from importlib import metadata


def read_version():
    """VERSION next to the source tree, else the installed distribution's version."""
    version_file = os.path.join(os.path.dirname(__file__), '..', 'VERSION')
    try:
        with open(version_file) as f:
            return f.read().strip()
    except FileNotFoundError:
        try:
            return metadata.version("mmp-hypergraph")
        except metadata.PackageNotFoundError:
            return "unknown"


__version__ = read_version()
