pub mod braided;
pub mod datum;
pub mod groups;
pub mod io;
pub mod isomorphy;
pub mod kalgebra;
pub mod linalg;
pub mod quotients;
pub mod roots;
pub mod scalars;
pub mod smith;
pub mod uqgroup;
