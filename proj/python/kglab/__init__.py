from ._core import intertwining, linear_rates, positivity_scan, shoot, soliton, spectrum

__all__ = ["intertwining", "linear_rates", "positivity_scan", "shoot", "soliton", "spectrum"]
