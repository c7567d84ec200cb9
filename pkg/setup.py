from setuptools import setup, find_packages

setup(
    name='ezqhdl',
    version='0.0.1',
    package_dir={'': 'src'},
    packages=find_packages(where="src", include=['ezqhdl', 'ezqhdl.*']),
    package_data={'ezqhdl': ['data/*.qhdl', 'data/*.json']},
    install_requires=[
        'parsimonious~=0.10.0',
        'numpy~=1.26.4',
        'scipy~=1.12.0',
    ],
    entry_points={
        'console_scripts': ['ezqhdl=ezqhdl.cli:main'],
    }
)
