class AnsatzTooSmall(Exception):
    pass


class CoefficientVanishes(ArithmeticError):
    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class CompletionCapExceeded(Exception):
    pass
