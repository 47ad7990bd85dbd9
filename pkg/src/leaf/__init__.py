"""leaf: local linear explanations of black-box classifiers and their evaluation."""

__version__ = "0.1.0"
