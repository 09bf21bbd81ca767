class SymcoreError(Exception):
    pass


class DivisionByZero(SymcoreError, ZeroDivisionError):
    pass


class DenominatorVanishes(SymcoreError, ZeroDivisionError):
    pass


class CyclicBinding(SymcoreError):
    pass


class NotPolynomial(SymcoreError):
    pass
