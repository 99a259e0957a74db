"""Classical ML baselines fitted on collected (temperature, humidity) data.

Three from-scratch trainers: ordinary least squares regression, a CART-style
Gini decision tree and a linear SVM trained with a deterministic SMO solver.
Regression predicts humidity from temperature; the two classifiers predict
the SAFE/UNSAFE label derived from the salubrity index.
"""

from .data import Sample2D, derive_labels, load_samples_csv, write_samples_csv  # noqa: F401
from .regression import RegressionModel, fit_linear_regression  # noqa: F401
from .tree import Leaf, Split, TreeNode, fit_decision_tree, tree_depth  # noqa: F401
from .svm import SvmModel, fit_svm  # noqa: F401
from .predict import predict  # noqa: F401
from .plotdata import export_model_plot_data, plot_data_to_csv  # noqa: F401
