"""tldiff: Whitney coverings, first-order-difference smoothness norms,
and Jones-type extension operators on grid-sampled domains."""

__version__ = "0.1.0"
