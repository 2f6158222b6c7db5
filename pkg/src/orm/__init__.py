"""Special one-relator monoids: pieces, units, normal forms and WELC reductions."""

__version__ = "0.1.0"
