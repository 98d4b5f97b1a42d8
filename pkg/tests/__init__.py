"""tests package for chanest."""
