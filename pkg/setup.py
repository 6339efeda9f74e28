from pathlib import Path

from setuptools import setup, find_packages


_HERE = Path(__file__).resolve().parent
_LONG_DESCRIPTION = (_HERE / "README.md").read_text(encoding="utf-8")

setup(
    name='walker',
    version='0.1.0',
    packages=find_packages(exclude=("tests", "tests.*", "examples", "examples.*")),
    install_requires=[
        "typer>=0.9.0",
        "pydantic>=2.0.0",
        "pandas>=2.0.0",
        "mpmath>=1.3.0",
        "numpy>=1.22.0",
        "scipy>=1.9.0",
    ],
    entry_points={
        'console_scripts': [
            'walker=walker._bootstrap:main',
        ],
    },
    description='Moments, densities and distributions of uniform random walks in any dimension',
    long_description=_LONG_DESCRIPTION,
    long_description_content_type='text/markdown',
    license='Apache-2.0',
    python_requires='>=3.9',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
    ],
)
