#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolicError {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("determinant is identically zero")]
    SingularSystem,
    #[error("system must be square with a matching right-hand side (got {rows}x{cols}, rhs {rhs})")]
    Shape { rows: usize, cols: usize, rhs: usize },
}
