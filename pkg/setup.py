# Copyright (c) 2021 The blerelay Developers
# All rights reserved.
# This software is licensed under the BSD 3-Clause License.
import os
from setuptools import setup, find_packages


requirements = [
    # Configuration and the optional sweep workspace.
    'signac>=1.0.0,<2',
    # For the templated run summaries.
    'jinja2>=2.8',
    # To enable the parallelized execution of sweeps across processes.
    'cloudpickle',
    # Progress bars
    'tqdm>=4.35.0',
    # Random streams and sweep statistics
    'numpy>=1.17',
]

description = "Discrete-event simulation of duty-cycled relays in BLE advertising networks."

try:
    this_path = os.path.dirname(os.path.abspath(__file__))
    fn_readme = os.path.join(this_path, 'README.md')
    with open(fn_readme) as fh:
        long_description = fh.read()
except (IOError, OSError):
    long_description = description

setup(
    name='blerelay',
    version='0.3.0',
    packages=find_packages(exclude=['tests']),
    package_data={'blerelay': ['templates/*']},
    include_package_data=True,
    zip_safe=False,
    maintainer='blerelay Developers',
    author='blerelay Developers',
    description=description,
    long_description=long_description,
    long_description_content_type="text/markdown",
    keywords='bluetooth ble advertising relay simulation duty-cycle',

    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: BSD License",
        "Topic :: Scientific/Engineering",
        "Topic :: System :: Networking",
        "Programming Language :: Python :: 3.6",
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
    ],
    entry_points={
        'console_scripts': [
            'blerelay = blerelay.__main__:main',
        ],
    },

    install_requires=requirements,

    python_requires='>=3.6, <4',
)
