"""Ground-state connectivity of local Hamiltonians at desk scale."""

__version__ = "0.1.0"
