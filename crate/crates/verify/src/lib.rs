//! Holds the end-to-end acceptance run in `tests/acceptance.rs`; run it with
//! `cargo test -p cpa-scatter-verify --test acceptance`.
