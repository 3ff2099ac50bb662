class ValidationError(ValueError):
    """Input violates a documented precondition or file-format rule.

    The CLI maps this to exit code 1; ``OSError`` maps to exit code 2.
    """
