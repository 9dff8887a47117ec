# -*- coding: utf-8 -*-
import os
import sys
from setuptools import setup, find_packages

try:
    from setuptools.command.test import test as TestCommand
except ImportError:
    # setuptools 72 removed the test command
    from setuptools import Command as TestCommand


README = open(os.path.join(os.path.dirname(__file__), 'README.md')).read()


class PyTest(TestCommand):
    user_options = [
        ('pytest-args=', 'a', "[string] Arguments to pass to py.test")
    ]

    def initialize_options(self):
        self.pytest_args = ""

    def finalize_options(self):
        self.pytest_args = self.pytest_args.split(" ") if self.pytest_args else []

    def run(self):
        if self.distribution.install_requires:
            self.distribution.fetch_build_eggs(
                self.distribution.install_requires)
        if self.distribution.tests_require:
            self.distribution.fetch_build_eggs(self.distribution.tests_require)
        self.run_tests()

    def run_tests(self):
        # import here, cause outside the eggs aren't loaded
        import pytest
        errno = pytest.main(self.pytest_args)
        sys.exit(errno)


NAME = 'hausdorff-ext'
DESCRIPTION = 'Extensions of set functions defined on finite subsets, estimated by Hausdorff-metric refinement.'

install_requires = [
    'numpy>=1.21',
    'scipy>=1.7',
    'pyyaml>=5.4',
]

tests_require = [
    'pytest>=6.2',
    'pytest-cov>=2.12',
    'pycodestyle>=2.7',
    'hypothesis>=6.0',
]

version = '0.1.0'
__VERSION__ = version

setup(
    name=NAME,
    version=version,
    packages=find_packages(exclude=['tests']),
    include_package_data=True,
    license='MIT License',
    description=DESCRIPTION,
    long_description=README,
    classifiers=[
        'Intended Audience :: Science/Research',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    python_requires='>=3.7',
    install_requires=install_requires,
    tests_require=tests_require,
    cmdclass={'test': PyTest},
)
