"""Setup script for groundvqa."""

import os
from setuptools import setup, find_packages

# Get the current version number from inside the module
with open(os.path.join('groundvqa', 'version.py')) as version_file:
    exec(version_file.read())

# Load the long description from the README
with open('README.rst') as readme_file:
    long_description = readme_file.read()

# Load the required dependencies from the requirements file
with open("requirements.txt") as requirements_file:
    install_requires = requirements_file.read().splitlines()

setup(
    name = 'groundvqa',
    version = __version__,
    description = 'Two-stage grounded video question answering.',
    long_description = long_description,
    long_description_content_type = 'text/x-rst',
    python_requires = '>=3.8',
    packages = find_packages(),
    license = 'Apache License, 2.0',
    classifiers = [
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
        'License :: OSI Approved :: Apache Software License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
    ],
    platforms = 'any',
    keywords = ['video question answering', 'visual grounding', 'tracking', 'HOTA',
                'exponential moving average'],
    install_requires = install_requires,
    tests_require = ['pytest'],
    extras_require = {
        'plot'    : ['matplotlib'],
        'data'    : ['pandas'],
        'config'  : ['tomli; python_version < "3.11"'],
        'tests'   : ['pytest'],
        'all'     : ['matplotlib', 'pandas', 'tqdm', 'tomli; python_version < "3.11"', 'pytest']
    },
    entry_points = {
        'console_scripts' : ['groundvqa = groundvqa.cli.main:main'],
    },
)
