#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# Sphinx configuration for the equiaffine documentation.
import re
import os
import sys

sys.path.insert(0, os.path.abspath(os.pardir))

root = os.path.abspath(os.path.join(__file__, os.path.pardir, os.path.pardir))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax'
]

# Backticks resolve to Python objects, as in the docstrings
default_role = 'py:obj'

source_suffix = '.rst'
master_doc = 'index'

project = 'equiaffine'
copyright = '2026, the equiaffine developers'
author = 'the equiaffine developers'

with open(os.path.join(root, 'equiaffine', 'version.py'), 'r') as f:
    version = re.search(r"^__version__\s+=\s+'(.*)'$",
                        f.read(), flags=re.MULTILINE).group(1)
release = version

exclude_patterns = ['_build']
pygments_style = 'sphinx'

html_theme = 'sphinx_rtd_theme'
html_theme_options = {
    'collapse_navigation': True,
    'display_version': True,
    'navigation_depth': 3,
}

htmlhelp_basename = 'equiaffinedoc'
