//! Shared workloads for the pipeline benchmarks.

/// `(name, insertions, q_order)`
pub const WORKLOADS: &[(&str, &[u32], usize)] = &[
    ("tau0", &[0], 10),
    ("tau2", &[2], 10),
    ("tau1_tau1", &[1, 1], 8),
    ("tau2_tau0_tau0", &[2, 0, 0], 8),
    ("tau2_tau2_tau2", &[2, 2, 2], 6),
];
