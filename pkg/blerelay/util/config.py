# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
"""Contains logic for working with blerelay related information
stored in the signac config"""
from signac.common import config

from ..errors import ConfigKeyError


# Monkeypatch the signac config spec to include blerelay-specific fields.
config.cfg += """
[blerelay]
jobs = int(default=1)
show_traceback = boolean()
progress = boolean(default=False)
float_format = string(default='.6f')
"""


class _GetConfigValueNoneType(object):
    pass


_GET_CONFIG_VALUE_NONE = _GetConfigValueNoneType()


def require_config_value(key, default=_GET_CONFIG_VALUE_NONE):
    """Request a value from the user's configuration, fail if not available.

    :param key: The configuration key.
    :type key: str
    :param default: A default value in case the key cannot be found
        within the user's configuration.
    :return: The value or default value.
    :raises ConfigKeyError: If the key is not in the user's configuration
        and no default value is provided.
    """
    try:
        return config.load_config()['blerelay'][key]
    except KeyError:
        if default is _GET_CONFIG_VALUE_NONE:
            raise ConfigKeyError('blerelay.' + str(key))
        else:
            return default


def get_config_value(key, default=None):
    """Request a value from the user's configuration.

    :param key: The configuration key.
    :type key: str
    :param default: A default value in case the key cannot be found
        within the user's configuration.
    :return: The value if found, None if not found.
    """
    return require_config_value(key=key, default=default)


def get_config_flag(key, default=False):
    "Request a boolean value; string values such as 'yes' or 'off' are converted."
    value = get_config_value(key, default=default)
    if isinstance(value, str):
        return value.strip().lower() in ('1', 'true', 'yes', 'on')
    return bool(value)
