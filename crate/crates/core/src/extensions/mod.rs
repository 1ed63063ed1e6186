//! Two generalizations of the threshold model: a social-dynamics toy model
//! with static per-node attributes, and a general stateless rewrite protocol
//! that builds a spanning star.

mod social;
mod star;

pub use social::{
    niceness_g, parse_profile, random_profile, read_profile_file, social_potential, SocialProfile,
};
pub use star::{is_star, run_general, GeneralOutcome, GeneralProtocol, Progress, StarProtocol};
