"""Relational quantum reference frames over finite groups.

Thin wrapper over the compiled core. Configs and reports cross the
boundary as JSON text so the Python, CLI, and C++ entry points all share
one schema; ``json.loads`` them as needed.
"""

try:
    from . import _core
except ImportError:
    # Build-tree layout: the extension sits on sys.path next to the
    # package instead of inside it.
    import _core

canonical_config = _core.canonical_config
coherence = _core.coherence
config_hash = _core.config_hash
density_entropy = _core.density_entropy
effective_dimension = _core.effective_dimension
irrep_dimensions = _core.irrep_dimensions
list_presets = _core.list_presets
preset_config = _core.preset_config
preset_description = _core.preset_description
renyi_entropy = _core.renyi_entropy
run_config = _core.run_config
run_preset = _core.run_preset
version = _core.version

ConfigError = _core.ConfigError

__version__ = _core.version()

__all__ = [
    "ConfigError",
    "canonical_config",
    "coherence",
    "config_hash",
    "density_entropy",
    "effective_dimension",
    "irrep_dimensions",
    "list_presets",
    "preset_config",
    "preset_description",
    "renyi_entropy",
    "run_config",
    "run_preset",
    "version",
]
