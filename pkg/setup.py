# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

import os
import sys
from pathlib import Path

from setuptools import setup, find_packages

os.chdir(Path(__file__).parent)
SRC = Path("racetrack_hdc")


def get_version():
    with open("VERSION") as f:
        return f.read().rstrip()


def get_requirements():
    with open(SRC / "requirements.txt") as f:
        return [line.rstrip() for line in f]


if sys.version_info < (3, 7):
    raise SystemExit("racetrack-hdc requires Python >= 3.7.")

setup(
    name="racetrack-hdc",
    version=get_version(),
    packages=find_packages(include=["racetrack_hdc", "racetrack_hdc.*"]),
    package_data={"racetrack_hdc": ["requirements.txt"]},
    description="Simulator of hyperdimensional language recognition computed inside racetrack memory, "
                "bit-exact against a software reference, with energy and latency reports.",
    long_description=open(SRC / "README.md").read(),
    long_description_content_type="text/markdown",
    install_requires=get_requirements(),
    python_requires=">=3.7",
    entry_points={
        "console_scripts": [
            "racetrack_hdc=racetrack_hdc.__main__:main",
        ]
    },
    zip_safe=False,
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: BSD License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering",
        "Topic :: System :: Hardware",
    ],
    license_files=["LICENSE"],
)
