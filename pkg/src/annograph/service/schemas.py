"""Pydantic request and response models for the HTTP API."""

from __future__ import annotations

from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator


class AnchorRefModel(BaseModel):
    token: Optional[int] = None
    mention: Optional[str] = None
    relation: Optional[str] = None

    @model_validator(mode="after")
    def exactly_one(self):
        set_fields = [f for f in (self.token, self.mention, self.relation)
                      if f is not None]
        if len(set_fields) != 1:
            raise ValueError("exactly one of token/mention/relation must be set")
        return self

    def to_core(self):
        from ..model import AnchorRef
        if self.token is not None:
            return AnchorRef.token(self.token)
        if self.mention is not None:
            return AnchorRef.mention(self.mention)
        return AnchorRef.relation(self.relation)


class TokenModel(BaseModel):
    index: int
    start: int
    end: int
    surface: str


class MentionModel(BaseModel):
    id: str
    label: str
    type: Optional[str] = None
    layer: str = "semantic"
    anchors: list[tuple[int, int]]


class ArgumentModel(BaseModel):
    role: str
    target: AnchorRefModel


class RelationModel(BaseModel):
    id: str
    label: str
    type: Optional[str] = None
    layer: str = "semantic"
    directionality: str = "directed"
    trigger: Optional[AnchorRefModel] = None
    arguments: list[ArgumentModel]


class DocumentModel(BaseModel):
    id: str
    text: str
    source_format: str
    taxonomy_ref: Optional[str] = None
    tokens: list[TokenModel]
    mentions: list[MentionModel]
    relations: list[RelationModel]
    metadata: dict = Field(default_factory=dict)


class DataFolderEntryModel(BaseModel):
    id: str
    format: str
    files: list[str]
    taxonomy_id: Optional[str] = None


# --- edit operations ----------------------------------------------------------

class RelabelModel(BaseModel):
    kind: Literal["relabel"]
    id: str
    label: str


class RetypeModel(BaseModel):
    kind: Literal["retype"]
    id: str
    type: Optional[str] = None


class ReattachModel(BaseModel):
    kind: Literal["reattach"]
    relation_id: str
    arg_index: int
    target: AnchorRefModel


class CreateMentionModel(BaseModel):
    kind: Literal["create_mention"]
    label: str
    anchors: list[tuple[int, int]]
    id: Optional[str] = None
    type: Optional[str] = None
    layer: Literal["semantic", "syntactic"] = "semantic"


class CreateRelationModel(BaseModel):
    kind: Literal["create_relation"]
    label: str
    arguments: list[ArgumentModel]
    id: Optional[str] = None
    trigger: Optional[AnchorRefModel] = None
    directionality: Literal["directed", "undirected", "bidirectional"] = "directed"
    type: Optional[str] = None
    layer: Literal["semantic", "syntactic"] = "semantic"


class DeleteModel(BaseModel):
    kind: Literal["delete"]
    id: str


class HideModel(BaseModel):
    kind: Literal["hide"]
    id: str


class UnhideModel(BaseModel):
    kind: Literal["unhide"]
    id: str


class RecolorTypeModel(BaseModel):
    kind: Literal["recolor_type"]
    type: str
    color: str = Field(pattern=r"^#[0-9A-Fa-f]{6}$")
    cascade: bool = False


class MoveTokenModel(BaseModel):
    kind: Literal["move_token"]
    token_index: int
    row: int
    x: float


EditOpModel = Annotated[
    Union[RelabelModel, RetypeModel, ReattachModel, CreateMentionModel,
          CreateRelationModel, DeleteModel, HideModel, UnhideModel,
          RecolorTypeModel, MoveTokenModel],
    Field(discriminator="kind"),
]


class EditRequest(BaseModel):
    op: EditOpModel


class EditResponse(BaseModel):
    seq: int
    removed_ids: list[str] = Field(default_factory=list)
    document: DocumentModel


class ReplayResponse(BaseModel):
    replayed: int
    document: DocumentModel


class RecolorRequest(BaseModel):
    type: str
    color: str = Field(pattern=r"^#[0-9A-Fa-f]{6}$")
    cascade: bool = False


class TypeEntryModel(BaseModel):
    name: str
    color: str
    children: list["TypeEntryModel"] = Field(default_factory=list)


class TaxonomyModel(BaseModel):
    roots: list[TypeEntryModel]


TypeEntryModel.model_rebuild()
