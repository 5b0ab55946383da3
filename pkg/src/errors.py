class SimulationError(Exception):
    pass


class ConfigError(SimulationError, ValueError):

    def __init__(self, field_name: str, reason: str):
        self.field_name = field_name
        self.reason = reason
        super().__init__(f"{field_name}: {reason}")


class ContractViolation(SimulationError, AssertionError):
    pass


class ObservationImpossible(SimulationError):
    pass


class BudgetExceeded(SimulationError):
    pass


class OracleMismatch(SimulationError):
    pass
