pub mod braid;
pub mod cacti;
pub mod cells;
pub mod discs;
pub mod freegroup;
pub mod loops;
pub mod operad;
pub mod perm;
pub mod pl;
pub mod rational;
pub mod segments;
pub mod svg;
