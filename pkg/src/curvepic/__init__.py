"""Divisors and Picard groups of curves over finite fields."""
