"""Figure rendering for wqed CSV outputs."""

__version__ = "0.1.0"

from .data import MetadataError, Table, load_table
from .figures import FIGURES, render
