from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.models.permutation import RestrictionTuple


class IdentityParams(BaseModel):
    """Parameters of one identity check; which fields are required depends on the id"""

    model_config = ConfigDict(frozen=True)

    r: Optional[int] = Field(None, ge=1, description="Number of colors")
    n: Optional[int] = Field(None, ge=0, description="Size parameter (half size for folding identities)")
    b: Optional[int] = Field(None, ge=0, description="Character index, 0 <= b < r")
    restriction: Optional[RestrictionTuple] = Field(None, description="H or S tuple for refined checks")
    max_degree: Optional[int] = Field(None, ge=0, description="Series truncation cap K")

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {}
        for key in ("r", "n", "b", "max_degree"):
            value = getattr(self, key)
            if value is not None:
                data[key] = value
        if self.restriction is not None:
            data["restriction"] = [sorted(e) for e in self.restriction.entries]
        return data


class IdentityInfo(BaseModel):
    id: str
    description: str
    params: List[str] = Field(..., description="Required parameters")
    optional: List[str] = Field(default_factory=list, description="Optional parameters")


class IdentityReport(BaseModel):
    id: str
    params: Dict[str, Any]
    equal: bool
    elements: int = Field(..., description="Elements enumerated over both sides")
    lhs_elements: int = Field(..., description="Elements of the left-side family")
    elapsed_ms: Optional[float] = Field(None, description="Wall time; null unless timings are requested")
    lhs: Dict[str, Any]
    rhs: Dict[str, Any]
    lhs_text: str
    rhs_text: str
    extra: Dict[str, Dict[str, Any]] = Field(default_factory=dict, description="Further sides that must agree")
    notes: List[str] = Field(default_factory=list)


class SeriesReport(BaseModel):
    id: str
    n: int
    max_degree: int
    lhs: List[int]
    rhs: List[int]
    equal: bool


class LawReport(BaseModel):
    name: str
    params: Dict[str, Any]
    passed: bool
    checked: int = Field(..., description="Number of elements or cases examined")
    failures: List[str] = Field(default_factory=list, description="First few counterexamples")


class SelftestEntry(BaseModel):
    kind: str = Field(..., description="identity or law")
    name: str
    params: Dict[str, Any]
    passed: bool
    checked: int
    elapsed_ms: Optional[float] = None
    detail: Optional[str] = None


class SelftestSummary(BaseModel):
    level: str
    passed: bool
    total: int
    failed: List[str]
    entries: List[SelftestEntry]
