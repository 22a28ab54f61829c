from __future__ import annotations

import importlib.metadata

from packaging.version import Version, parse

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.viewcode', 'sphinx.ext.intersphinx', 'sphinx.ext.mathjax']

intersphinx_mapping = {
    'python': ('https://docs.python.org/3/', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
}

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'qpresheaf'
copyright = '2026, the qpresheaf developers'
author = 'the qpresheaf developers'
release = importlib.metadata.version('qpresheaf')
parsed: Version = parse(release)
version = f'{parsed.major}.{parsed.minor}'

exclude_patterns: list[str] = []
pygments_style = 'sphinx'
todo_include_todos = False

html_theme = 'furo'
html_static_path: list[str] = []
htmlhelp_basename = 'qpresheafdoc'

latex_elements: dict[str, str] = {}
latex_documents = [(master_doc, 'qpresheaf.tex', 'qpresheaf Documentation', author, 'manual')]

man_pages = [(master_doc, 'qpresheaf', 'qpresheaf Documentation', [author], 1)]

texinfo_documents = [
    (
        master_doc,
        'qpresheaf',
        'qpresheaf Documentation',
        author,
        'qpresheaf',
        'Order-theoretic checks of classical and quantum probability.',
        'Miscellaneous',
    )
]

autodoc_member_order = 'groupwise'
autodoc_docstring_signature = True
autodoc_typehints = 'description'
