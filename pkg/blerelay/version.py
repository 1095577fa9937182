# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.

__version__ = '0.3.0'

__all__ = ['__version__']
