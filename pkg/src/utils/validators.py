"""Configuration loading and validation utilities."""
import os
import re
from typing import Any, Dict

import yaml
from dotenv import load_dotenv

from ..experiments import Guards

VALID_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
VALID_OUTPUT_FORMATS = ['csv', 'json']

DEFAULTS: Dict[str, Dict[str, Any]] = {
    'guards': {
        'max_code_dimension': Guards.max_code_dimension,
        'max_ray_columns': Guards.max_ray_columns,
        'max_row_weight': Guards.max_row_weight,
        'max_nsp_lps': Guards.max_nsp_lps,
        'cs_opt_max_columns': Guards.cs_opt_max_columns,
        'cs_opt_max_k': Guards.cs_opt_max_k,
    },
    'experiments': {
        'seed': 7,
        'trials': 100,
        'workers': 1,
        'magnitude_max': 9,
    },
    'output': {
        'format': 'csv',
        'directory': '.',
    },
    'logging': {
        'level': 'INFO',
        'file': None,
        'console_colors': True,
    },
}


def load_config(config_path: str = "config/config.yaml") -> Dict[str, Any]:
    """
    Load and validate configuration from YAML file with environment variable substitution.

    Args:
        config_path: Path to the configuration file

    Returns:
        Validated configuration dictionary, missing keys filled with defaults

    Raises:
        FileNotFoundError: If config file doesn't exist
        ValueError: If configuration is invalid
    """
    # Load environment variables from .env file
    load_dotenv()

    if not os.path.exists(config_path):
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    with open(config_path, 'r') as f:
        config_content = f.read()

    config_content = substitute_env_vars(config_content)
    config = yaml.safe_load(config_content) or {}
    if not isinstance(config, dict):
        raise ValueError("Configuration must be a mapping of sections")

    config = apply_defaults(config)
    validate_config(config)
    return config


def default_config() -> Dict[str, Any]:
    """Built-in configuration, used when no file is given."""
    return apply_defaults({})


def substitute_env_vars(content: str) -> str:
    """
    Substitute ${VAR_NAME} and ${VAR_NAME:-default} placeholders from the environment.

    Args:
        content: String containing placeholders

    Returns:
        String with substituted values

    Raises:
        ValueError: If a variable without default is not set
    """
    pattern = re.compile(r'\$\{([^}:]+)(?::-([^}]*))?\}')

    def replace(match):
        var_name, default = match.group(1), match.group(2)
        value = os.getenv(var_name)
        if value is None or (value == '' and default is not None):
            if default is None:
                raise ValueError(f"Environment variable {var_name} is not set")
            return default
        return value

    return pattern.sub(replace, content)


def apply_defaults(config: Dict[str, Any]) -> Dict[str, Any]:
    merged: Dict[str, Any] = {}
    for section, values in DEFAULTS.items():
        given = config.get(section) or {}
        if not isinstance(given, dict):
            raise ValueError(f"'{section}' must be a mapping")
        merged[section] = {**values, **given}
    for section, values in config.items():
        merged.setdefault(section, values)
    return merged


def _positive_int(value: Any, name: str, minimum: int = 1) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ValueError(f"'{name}' must be an integer >= {minimum}, got {value!r}")


def validate_config(config: Dict[str, Any]) -> None:
    """
    Validate the configuration dictionary.

    Args:
        config: Configuration dictionary to validate

    Raises:
        ValueError: If configuration is invalid
    """
    for field, value in config['guards'].items():
        if field not in DEFAULTS['guards']:
            raise ValueError(f"Unknown guard 'guards.{field}'")
        _positive_int(value, f"guards.{field}")

    experiments = config['experiments']
    _positive_int(experiments['seed'], 'experiments.seed', minimum=0)
    _positive_int(experiments['trials'], 'experiments.trials')
    _positive_int(experiments['workers'], 'experiments.workers')
    _positive_int(experiments['magnitude_max'], 'experiments.magnitude_max')

    output = config['output']
    if output['format'] not in VALID_OUTPUT_FORMATS:
        raise ValueError(f"'output.format' must be one of: {', '.join(VALID_OUTPUT_FORMATS)}")
    if not isinstance(output['directory'], str) or not output['directory']:
        raise ValueError("'output.directory' must be a non-empty path")

    logging = config['logging']
    if str(logging['level']).upper() not in VALID_LEVELS:
        raise ValueError(f"'logging.level' must be one of: {', '.join(VALID_LEVELS)}")
