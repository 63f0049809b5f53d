"""Request/response shapes for the interview service API."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class CreateSessionRequest(BaseModel):
    locale: Optional[str] = None


class AnswerRequest(BaseModel):
    nodeId: str
    answer: str


class ReviseRequest(BaseModel):
    index: int
    answer: str


class CommentRequest(BaseModel):
    modelId: str
    version: str
    locale: Optional[str] = None
    nodeId: Optional[str] = None
    text: str = Field(min_length=1)


class VisibilityRequest(BaseModel):
    visibility: Literal["public", "private"]


class PromptPayload(BaseModel):
    nodeId: str
    text: str
    elaboration: Optional[str] = None
    answers: list[str]
    answerTexts: dict[str, str]
    entityTooltips: dict[str, str]
    sectionTitles: list[str] = []


class TranscriptItem(BaseModel):
    index: int
    node: str
    answer: Optional[str] = None
    kind: str = "answer"
    text: Optional[str] = None
    answerText: Optional[str] = None
    answers: list[str] = []  # valid answers at that prompt, for the revise control
    answerTexts: dict[str, str] = {}


class SessionState(BaseModel):
    sessionId: str
    modelId: str
    version: str
    locale: Optional[str] = None
    finished: bool
    prompt: Optional[PromptPayload] = None
    report: Optional[dict] = None
    transcript: list[TranscriptItem] = []


class ModelIndexEntry(BaseModel):
    modelId: str
    version: str
    title: str
    locales: list[str] = []


class ModelIndex(BaseModel):
    models: list[ModelIndexEntry]


class CommentResponse(BaseModel):
    commentId: str


class CommentRecord(BaseModel):
    commentId: str
    modelId: str
    version: str
    locale: Optional[str] = None
    nodeId: Optional[str] = None
    text: str
    created: str


class CommentList(BaseModel):
    comments: list[CommentRecord]


class UploadResponse(BaseModel):
    modelId: str
    version: str
    visibility: str
    accessToken: Optional[str] = None


class VisibilityResponse(BaseModel):
    modelId: str
    version: str
    visibility: str
    accessToken: Optional[str] = None
