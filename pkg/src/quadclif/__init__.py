"""quadclif: exact verification toolkit for invariant nets of quadrics,
their determinant cubics, and the attached graded Clifford algebras."""

__version__ = "0.1.0"
