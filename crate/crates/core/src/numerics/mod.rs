//! Numerical building blocks: Gauss rules, adaptive quadrature, Bessel
//! functions, symmetric linear algebra and sphere sampling.

pub mod adaptive;
pub mod bessel;
pub mod gauss;
pub mod linalg;
pub mod sphere;
