# Commands Package
from plse.commands import figure, fit, prox, simulate

COMMANDS = [fit, prox, simulate, figure]

__all__ = ["COMMANDS", "figure", "fit", "prox", "simulate"]
