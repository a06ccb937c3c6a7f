"""Searching for braids that preserve no bi-order of a free group.

Submodules are imported on demand so that, for example, certificate
verification never loads the search engine.
"""

__version__ = "0.1.0"
