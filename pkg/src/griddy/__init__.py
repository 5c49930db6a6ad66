"""griddy: NAE-3SAT to integer-lattice unit-distance graph reduction toolkit."""

__version__ = "0.1.0"
