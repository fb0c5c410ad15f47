"""Exact calculus of differential and integral forms on superdomains."""
