"""astjudge: differential testing of AST mapping algorithms.

Runs several AST mappers over a file revision, refines their node mappings
into statement and token mappings, and decides which mapper produced the
inaccurate ones.
"""

__version__ = "1.0.0"
