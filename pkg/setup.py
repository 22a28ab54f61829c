from setuptools import setup

setup_reqs = ['setuptools_scm[toml]>=3.4']


with open('README.md', encoding='utf-8') as readme:
    long_desc = readme.read()


setup(
    name='qpresheaf',
    use_scm_version={'fallback_version': '0.1.0'},
    description='Order-theoretic checks of classical and quantum probability on finite-dimensional Hilbert spaces',
    long_description=long_desc,
    long_description_content_type='text/markdown',
    python_requires='>=3.9',
    setup_requires=setup_reqs,
    install_requires=['numpy>=1.22', 'scipy>=1.8'],
    license='MIT',
    keywords=['quantum probability', 'galois connection', 'spectral presheaf', 'quantile'],
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Programming Language :: Python :: 3.13',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Scientific/Engineering :: Physics',
        'Typing :: Typed',
    ],
    zip_safe=False,
    packages=['qpresheaf', 'qpresheaf.cli'],
    package_dir={'': 'src'},
    package_data={'qpresheaf': ['py.typed', 'data/*.json']},
    entry_points={'console_scripts': ['qpresheaf = qpresheaf.cli:main']},
)
