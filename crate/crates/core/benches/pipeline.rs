//! Placeholder bench; filled in once the pipeline modules land.

fn main() {}
