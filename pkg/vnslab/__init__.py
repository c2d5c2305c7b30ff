"""Desk-scale Vlasov-Navier-Stokes simulation lab."""

__version__ = "0.1.0"
