"""gkzpy - slopes, Gevrey series and Borel sums of A-hypergeometric systems."""

__version__ = "0.1.0"
