from ..symcore.parse import ParseError, UndeclaredSymbol


class DuplicateEquation(ParseError):
    pass


class NormalizationFailure(Exception):
    pass


__all__ = ["ParseError", "UndeclaredSymbol", "DuplicateEquation", "NormalizationFailure"]
