#!/usr/bin/env python3
"""
PoisonSnek Configuration Manager
Handles loading, saving, and managing experiment configuration
"""

import copy
import json
import logging
import os
from typing import Any, Dict

from data_io.experiment import ExperimentConfig

logger = logging.getLogger(__name__)


def default_config() -> Dict[str, Any]:
    """Default configuration: the desk-scale synthetic attack."""
    return ExperimentConfig().to_dict()


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigManager:
    """Manages experiment configuration with persistence.

    File values are merged over the defaults, so a config file only needs
    the keys it changes. With strict=False a missing or unreadable file
    falls back to the defaults with a warning; with strict=True it raises.
    """

    def __init__(self, config_file: str = "config.json", strict: bool = False):
        self.config_file = config_file
        self.strict = strict
        self.config: Dict[str, Any] = {}
        self.load_config()

    def load_config(self) -> bool:
        """Load configuration from file."""
        if not os.path.exists(self.config_file):
            if self.strict:
                raise FileNotFoundError(f"configuration file {self.config_file} not found")
            logger.warning(f"Configuration file {self.config_file} not found, using defaults")
            self.config = default_config()
            return False
        try:
            with open(self.config_file, 'r') as f:
                loaded = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            if self.strict:
                raise
            logger.warning(f"Error loading configuration: {e}; using defaults")
            self.config = default_config()
            return False
        if not isinstance(loaded, dict):
            raise ValueError(f"{self.config_file} must hold a JSON object")
        self.config = _merge(default_config(), loaded)
        logger.info(f"Loaded configuration from {self.config_file}")
        return True

    def save_config(self) -> bool:
        """Save current configuration to file."""
        try:
            with open(self.config_file, 'w') as f:
                json.dump(self.config, f, indent=2)
            logger.info(f"Saved configuration to {self.config_file}")
            return True
        except OSError as e:
            logger.error(f"Error saving configuration: {e}")
            return False

    def get(self, key_path: str, default: Any = None) -> Any:
        """Get configuration value by dot-separated key path."""
        value: Any = self.config
        for key in key_path.split('.'):
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default
        return value

    def set(self, key_path: str, value: Any, persist: bool = False) -> bool:
        """Set configuration value by dot-separated key path."""
        keys = key_path.split('.')
        config = self.config

        # Navigate to the parent of the final key
        for key in keys[:-1]:
            if key not in config or not isinstance(config[key], dict):
                config[key] = {}
            config = config[key]
        config[keys[-1]] = value

        return self.save_config() if persist else True

    def experiment(self) -> ExperimentConfig:
        """The typed experiment described by the current configuration."""
        return ExperimentConfig.from_dict(self.config)
