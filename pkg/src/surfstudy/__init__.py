"""Space-budgeted 3D surface graphs for multi-year gridded data, plus the
study machinery (trial plans, HTTP service, analytics) to compare them.
"""

__version__ = "0.1.0"

from .analytics import (
    AnalyticsSummary,
    PlanStore,
    ResponseLog,
    TrialResponse,
    accuracy_gap,
    record_response,
    summarize,
    summary_to_dict,
    write_summary_tables,
)
from .colors import (
    ColorRamp,
    band_colors,
    color_for_value,
    identity_color,
    identity_ramp,
    luminance,
    value_ramp,
)
from .errors import (
    AsciiGridError,
    BandConfigError,
    DatasetError,
    DegenerateDataError,
    DuplicateResponseError,
    EmptyMeshError,
    LayoutError,
    ResponseError,
    SurfStudyError,
    TieError,
    TrialGenerationError,
    UnknownTrialError,
)
from .gltf import export_scene, load_scene_dir, mesh_to_glb, parse_glb, scene_manifest
from .horizon import BandParams, HorizonMesh, band_value, clip_triangle_at_level, decompose
from .layout import (
    DEFAULT_BANDS,
    DEFAULT_S,
    TECHNIQUES,
    LayoutParams,
    Scene,
    SceneSlot,
    assemble_scene,
    default_layout,
    slot_extent,
)
from .mesh import SurfaceMesh, projected_area, triangulate
from .protocol import (
    Probe,
    StudyPlan,
    Trial,
    build_study_plan,
    generate_trial,
    ground_truth,
    plan_from_dict,
    plan_to_dict,
    plan_without_answers,
    probe_value,
    probe_xy,
)
from .raster import (
    Dataset,
    HeightField,
    format_ascii_grid,
    load_dataset_manifest,
    parse_ascii_grid,
    read_ascii_grid,
    subset_dataset,
    synthesize_dataset,
    synthesize_field,
    validate_dataset,
    write_ascii_grid,
    write_dataset,
)
from .service import StudyService, create_app

__all__ = [
    "AnalyticsSummary",
    "AsciiGridError",
    "BandConfigError",
    "BandParams",
    "ColorRamp",
    "Dataset",
    "DatasetError",
    "DegenerateDataError",
    "DuplicateResponseError",
    "EmptyMeshError",
    "HeightField",
    "HorizonMesh",
    "LayoutError",
    "LayoutParams",
    "PlanStore",
    "Probe",
    "ResponseError",
    "ResponseLog",
    "Scene",
    "SceneSlot",
    "StudyPlan",
    "StudyService",
    "SurfStudyError",
    "SurfaceMesh",
    "TieError",
    "Trial",
    "TrialGenerationError",
    "TrialResponse",
    "UnknownTrialError",
    "accuracy_gap",
    "assemble_scene",
    "band_colors",
    "band_value",
    "build_study_plan",
    "clip_triangle_at_level",
    "color_for_value",
    "create_app",
    "decompose",
    "default_layout",
    "export_scene",
    "format_ascii_grid",
    "generate_trial",
    "ground_truth",
    "identity_color",
    "identity_ramp",
    "load_dataset_manifest",
    "load_scene_dir",
    "luminance",
    "mesh_to_glb",
    "parse_ascii_grid",
    "parse_glb",
    "plan_from_dict",
    "plan_to_dict",
    "plan_without_answers",
    "probe_value",
    "probe_xy",
    "projected_area",
    "read_ascii_grid",
    "record_response",
    "scene_manifest",
    "slot_extent",
    "subset_dataset",
    "summarize",
    "summary_to_dict",
    "synthesize_dataset",
    "synthesize_field",
    "triangulate",
    "validate_dataset",
    "value_ramp",
    "write_ascii_grid",
    "write_dataset",
    "write_summary_tables",
    "DEFAULT_BANDS",
    "DEFAULT_S",
    "TECHNIQUES",
]
