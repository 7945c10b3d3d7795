# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.
#
# http://www.sphinx-doc.org/en/stable/config

# -- Path setup --------------------------------------------------------------

# Incase the project was not installed
import os
import sys
sys.path.insert(0, os.path.abspath('..'))

import rankql


# -- Project information -----------------------------------------------------

project = 'rankql'
copyright = "2026, rankql developers"
author = 'rankql developers'

# The short X.Y version
version = rankql.__version__
# The full version, including alpha/beta/rc tags
release = rankql.__version__


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autosummary',
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx.ext.napoleon',
    'sphinx.ext.intersphinx',
    'sphinx_click',
]

autosummary_generate = True
napoleon_google_docstring = False
napoleon_numpy_docstring = True
napoleon_use_param = False
napoleon_use_ivar = True

source_suffix = '.rst'
master_doc = 'index'
language = "en"
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'default'

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
    'pandas': ('https://pandas.pydata.org/pandas-docs/stable/', None),
}

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
htmlhelp_basename = 'rankqldoc'

# -- Options for LaTeX output ------------------------------------------------

latex_documents = [
    (master_doc, 'rankql.tex', 'rankql Documentation', 'rankql', 'manual'),
]

# -- Options for manual page output ------------------------------------------

man_pages = [
    (master_doc, 'rankql', 'rankql Documentation', [author], 1)
]
