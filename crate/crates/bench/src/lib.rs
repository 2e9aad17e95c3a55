//! Shared setup for the criterion benches; no library code of its own.
