#! /usr/bin/env python3

from setuptools import setup, find_packages

setup(
    name="canonicalwebteam.curveasym",
    version="1.0.0",
    author="Canonical webteam",
    author_email="webteam@canonical.com",
    description=(
        "Numerical experiments on where support and mean value points "
        "sit on a shrinking chord, with a Flask report blueprint."
    ),
    packages=find_packages(exclude=["tests", "tests.*"]),
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    install_requires=[
        "Flask>=1.0.2",
        "humanize",
        "numpy",
        "scipy",
    ],
    entry_points={
        "console_scripts": [
            "curveasym = canonicalwebteam.curveasym.cli:main",
        ],
    },
)
