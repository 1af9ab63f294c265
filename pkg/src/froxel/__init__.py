"""froxel — frustum-voxel analysis of camera-array light fields.

A light field captured by a planar camera grid is discretized into froxels:
frustum-shaped voxels one pixel-cell wide and high in a central reference
view and one pixel of disparity deep.  Binning every captured ray into its
froxel turns the light field into a structure where redundancy, view
dependence, and occlusion become directly countable — enabling ray-count
histograms ("fristograms"), Lambertian analysis, froxel-domain denoising,
ray reduction, and occlusion-aware view synthesis.

Subpackages/modules:
  lfgeom    camera-array configuration and froxel-grid geometry
  binning   ray binning, the FroxelStore, fristograms
  analysis  per-froxel color statistics and Lambertian classification
  noise     deterministic Gaussian / salt-and-pepper image noise
  filters   froxel-domain mean/median reduction and the FRXL file format
  synth     occlusion-aware novel-view synthesis
  metrics   PSNR and SSIM
  lfio      PFM/PPM/PGM/config/light-field-directory I/O
  scenegen  synthetic multi-view scenes with exact depth
  service   FastAPI service wrapping the pipelines
  cli       command-line client of the service
"""

from .analysis import (
    DEFAULT_TAU,
    FroxelColorStats,
    LambertianLabel,
    Lambertianness,
    classify_lambertian,
    classify_store,
    color_stats,
    export_froxel_patch,
    export_stats_csv,
)
from .binning import (
    Fristogram,
    FroxelStore,
    LightField,
    RaySample,
    bin_lightfield,
    export_cdf_csv,
    export_fristogram_csv,
    fristogram,
    fristogram_cdf,
    reduction_factor,
)
from .filters import (
    FilterStat,
    ReducedField,
    ReducedFroxel,
    froxel_mean,
    froxel_median,
    read_frxl,
    reduce_store,
    write_frxl,
)
from .lfgeom import (
    BaselineMode,
    CameraArrayConfig,
    CameraId,
    FroxelIndex,
    WorldPoint,
    camera_center,
    disparity_constant,
    froxel_depth,
    froxel_of_point,
    froxel_width_height,
    slice_of_depth,
    slice_representative_depth,
    unproject,
)
from .metrics import QualityReport, evaluate, psnr, ssim
from .noise import (
    GaussianNoise,
    NoiseParams,
    SaltPepperNoise,
    add_gaussian,
    add_noise,
    add_salt_pepper,
    gaussian_field,
)
from .synth import ViewRequest, synthesize

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # lfgeom
    "BaselineMode",
    "CameraArrayConfig",
    "CameraId",
    "WorldPoint",
    "FroxelIndex",
    "froxel_width_height",
    "froxel_depth",
    "disparity_constant",
    "slice_of_depth",
    "slice_representative_depth",
    "camera_center",
    "unproject",
    "froxel_of_point",
    # binning
    "RaySample",
    "LightField",
    "FroxelStore",
    "Fristogram",
    "bin_lightfield",
    "fristogram",
    "fristogram_cdf",
    "reduction_factor",
    "export_fristogram_csv",
    "export_cdf_csv",
    # analysis
    "DEFAULT_TAU",
    "FroxelColorStats",
    "Lambertianness",
    "LambertianLabel",
    "color_stats",
    "classify_lambertian",
    "classify_store",
    "export_stats_csv",
    "export_froxel_patch",
    # noise
    "GaussianNoise",
    "SaltPepperNoise",
    "NoiseParams",
    "gaussian_field",
    "add_gaussian",
    "add_salt_pepper",
    "add_noise",
    # filters
    "FilterStat",
    "ReducedFroxel",
    "ReducedField",
    "froxel_mean",
    "froxel_median",
    "reduce_store",
    "write_frxl",
    "read_frxl",
    # synth
    "ViewRequest",
    "synthesize",
    # metrics
    "QualityReport",
    "psnr",
    "ssim",
    "evaluate",
]
