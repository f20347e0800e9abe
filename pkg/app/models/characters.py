from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class CharacterForm(str, Enum):
    LENGTH = "length-form"
    CLASSICAL = "classical-form"


class CharacterLabel(BaseModel):
    """χ_{a,b}: length form (-1)^{a(ℓ-col)} ω^{b·col}, classical form (-1)^{a·inv|π|} ω^{b·col}"""

    model_config = ConfigDict(frozen=True)

    a: int = Field(..., ge=0, le=1)
    b: int = Field(..., ge=0)
    form: CharacterForm = CharacterForm.LENGTH

    @property
    def key(self) -> str:
        return f"{self.a},{self.b}"
