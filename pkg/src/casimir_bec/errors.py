"""Exception types shared across the package."""


class CasimirBecError(Exception):
    """Base class for all package errors."""


class ConfigurationError(CasimirBecError):
    """Bad or incomplete user input (config file, species registry)."""


class PhysicsDomainError(CasimirBecError, ValueError):
    """Argument outside the physical domain of a formula."""


class ExtrapolationError(CasimirBecError):
    """Tabulated response queried outside its grid; never extrapolated silently."""


class UnsupportedConfigurationError(CasimirBecError):
    """Setup outside the implemented scope (e.g. more than two fundamentals)."""


class InstabilityError(CasimirBecError):
    """Bogoliubov-de Gennes spectrum has genuinely complex eigenvalues."""


class ContractError(CasimirBecError):
    """Mismatched inputs handed between pipeline stages."""
