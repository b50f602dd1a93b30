from pydantic import BaseModel


class OracleReport(BaseModel):
    max_symmetry_violation: float
    reconstruction_error: float
    monomial_rank_bound_holds: bool
