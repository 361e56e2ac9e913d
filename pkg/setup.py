from setuptools import setup, find_packages
from os import path
from io import open

here = path.abspath(path.dirname(__file__))

# Get the long description from the `README.md` file
with open(path.join(here, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

setup(
    name='python-scenopt',
    version='0.1.0',
    description='Scenario-based robust convex optimization over networks of compute nodes.',
    long_description=long_description,
    long_description_content_type='text/markdown',
    license='GPLv2',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'License :: OSI Approved :: GNU General Public License v2 (GPLv2)',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
    ],
    keywords='python scenario approach robust optimization distributed subgradient consensus',
    packages=find_packages(exclude=['contrib', 'docs', 'tests', 'tests.*']),
    python_requires='>=3.8',
    install_requires=[
        'numpy>=1.20',
        'scipy>=1.6',
    ],
    extras_require={
        'dev': ['setuptools', 'wheel', 'twine', 'pdoc3'],
        'test': ['tox', 'pytest'],
    },
    package_data={
        'scenopt': ['scenopt.md'],
    },
    data_files=[],
    entry_points={
        'console_scripts': [
            'scenopt=scenopt.cli:main',
        ],
    },
)
