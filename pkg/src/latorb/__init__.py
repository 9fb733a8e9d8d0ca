"""latorb: exact quadratic-lattice algebra, lattice isometries,
irrationality certificates, and orbit exploration on hyperboloids."""

__version__ = "0.1.0"
