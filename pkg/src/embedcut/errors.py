"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid user-supplied data: malformed files, out-of-range parameters,
    mismatched universes. The CLI maps this to exit code 2."""
