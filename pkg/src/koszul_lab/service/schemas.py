"""Pydantic request/response models for the koszul-lab service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class RunRequest(BaseModel):
    """A script to execute, with the same knobs as the CLI flags."""

    script: str
    degree: Optional[int] = Field(default=None, ge=2)
    threads: int = Field(default=1, ge=1, le=64)
    budget: Optional[int] = Field(default=None, ge=1)


class RunResponse(BaseModel):
    """Execution outcome: exit code, canonical report, DOT artifacts.

    dot_files maps suggested file names to DOT source; the caller decides
    where to put them (the CLI writes them under --dot).
    """

    exit_code: int
    report: dict
    dot_files: dict[str, str] = {}
    dot_dir_hint: Optional[str] = None
    json_path_hint: Optional[str] = None


class HealthResponse(BaseModel):
    status: str
    name: str
    version: str


class PresetRequest(BaseModel):
    kind: str
    params: dict[str, int] = {}


class PresentationDescriptor(BaseModel):
    p: int
    generators: list[str]
    relations: list[str]
    provenance: Optional[str] = None
