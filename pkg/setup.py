"""Acoustics-to-word CTC toolkit."""
from setuptools import find_packages
from setuptools import setup

import os


here = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(here, 'README.rst')) as f:
    README = f.read()
with open(os.path.join(here, 'HISTORY.rst')) as f:
    CHANGES = f.read()

requires = [
    'numpy>=1.17',
    'prettyconf>=2.0',
    'python-logstash',
    'scipy>=1.8',
    'setuptools',
]

test_requirements = [
    'flake8',
    'pytest',
    'pytest-cov',
]

setup(
    name='briefy.a2w',
    version='0.1.0',
    description='Acoustics-to-word CTC models: training, decoding, scoring and analysis',
    long_description=README + '\n\n' + CHANGES,
    classifiers=[
        'Programming Language :: Python',
        'Programming Language :: Python :: 3.11',
    ],
    author='Briefy Tech Team',
    author_email='developers@briefy.co',
    keywords='briefy speech ctc',
    packages=find_packages('src'),
    package_dir={'': 'src'},
    namespace_packages=['briefy', ],
    include_package_data=True,
    zip_safe=False,
    python_requires='>=3.9',
    test_suite='tests',
    tests_require=test_requirements,
    install_requires=requires,
    extras_require={'test': test_requirements},
    entry_points="""
    [console_scripts]
     a2w = briefy.a2w.cli:main
    """,
)
