//! Evaluation splits, ranking metrics and the multi-run harness.

mod metrics;
mod run;
mod split;

pub use metrics::{binary_precision_recall, mean_sample_std, pr_auc, precision_recall_at_prevalence};
pub use run::{
    read_report, run_eval, write_report, EvalConfig, EvalReport, MethodRun, ReportRow, RowStatus, RunRecord,
};
pub use split::{sample_indices, split, split_inductive, split_transductive, EvalSplit, TestPair};
