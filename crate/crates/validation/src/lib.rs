//! Holds the `acceptance` test target, which checks the whole workspace
//! end to end. See `tests/acceptance.rs`.
