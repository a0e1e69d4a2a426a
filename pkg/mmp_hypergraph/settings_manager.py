import os

from mmp_hypergraph.console import get_logger

logger = get_logger(__name__)


class SettingsManager:

    DEFAULT_SETTINGS = {
        'budget_nodes': 2_000_000,      # node budget of every exact search
        'runs': 50_000,                 # heuristic index runs
        'seed': 0,
        'eps': 1e-10,                   # orthogonality tolerance
        'workers': 1,
        'canonical_budget': 200_000,    # canonical form search nodes
        'critical_attempts': 20,        # random descents in find_criticals
    }

    CONFIG_FILE = '.mmpconfig'

    ENVIRONMENT = {
        'MMP_BUDGET_NODES': 'budget_nodes',
        'MMP_WORKERS': 'workers',
    }

    def __init__(self,
                 base_path='.',
                 load_defaults=True,
                 load_mmpconfig=True,
                 load_environment=True,
                 extra_settings=None):
        self.base_path = base_path
        self.load_defaults = load_defaults
        self.load_mmpconfig = load_mmpconfig
        self.load_environment = load_environment
        self.extra_settings = extra_settings or {}
        self.settings = {}

        self.init_settings()

    @classmethod
    def coerce(cls, key, value):
        if key not in cls.DEFAULT_SETTINGS:
            raise ValueError(f"unknown setting {key!r}")
        kind = type(cls.DEFAULT_SETTINGS[key])
        try:
            if kind is int and isinstance(value, str):
                return int(value.replace('_', ''))
            return kind(value)
        except (TypeError, ValueError):
            raise ValueError(f"setting {key!r} expects {kind.__name__}, got {value!r}")

    def read_config_file(self, path):
        values = {}
        with open(path, 'r') as f:
            for line_no, line in enumerate(f, start=1):
                line = line.strip()
                if not line or line.startswith('#'):
                    continue
                if '=' not in line:
                    raise ValueError(f"{path}:{line_no}: expected 'key = value'")
                key, value = (part.strip() for part in line.split('=', 1))
                values[key] = self.coerce(key, value)
        return values

    def init_settings(self):
        settings = {}

        if self.load_defaults:
            settings.update(SettingsManager.DEFAULT_SETTINGS)

        config_path = os.path.join(self.base_path, self.CONFIG_FILE)
        if self.load_mmpconfig and os.path.exists(config_path):
            file_settings = self.read_config_file(config_path)
            logger.debug("settings from %s: %s", config_path, file_settings)
            settings.update(file_settings)

        budget_cap = None
        if self.load_environment:
            for variable, key in self.ENVIRONMENT.items():
                if variable in os.environ:
                    settings[key] = self.coerce(key, os.environ[variable])
            if 'budget_nodes' in settings and 'MMP_BUDGET_NODES' in os.environ:
                budget_cap = settings['budget_nodes']

        for key, value in self.extra_settings.items():
            if value is not None:
                settings[key] = self.coerce(key, value)

        # the environment caps every budget, including the one given on the command line
        if budget_cap is not None:
            for key in ('budget_nodes', 'canonical_budget'):
                if key in settings:
                    settings[key] = min(settings[key], budget_cap)

        self.settings = settings

    def get(self, key):
        return self.settings.get(key, SettingsManager.DEFAULT_SETTINGS.get(key))

    def __getitem__(self, key):
        return self.settings[key]
