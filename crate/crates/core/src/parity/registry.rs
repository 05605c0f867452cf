use super::{Enumeration, ParityGame, Solution, Zielonka};

/// A parity game solving algorithm.
pub trait ParitySolver: Send + Sync {
    /// Registry key, also used on the command line.
    fn name(&self) -> &'static str;

    fn solve(&self, g: &ParityGame) -> Solution;
}

/// Solvers selectable by name.
pub struct SolverRegistry {
    solvers: Vec<Box<dyn ParitySolver>>,
}

impl SolverRegistry {
    pub fn empty() -> Self {
        SolverRegistry {
            solvers: Vec::new(),
        }
    }

    /// Replaces any solver registered under the same name.
    pub fn register(&mut self, solver: Box<dyn ParitySolver>) {
        self.solvers.retain(|s| s.name() != solver.name());
        self.solvers.push(solver);
    }

    pub fn get(&self, name: &str) -> Option<&dyn ParitySolver> {
        self.solvers
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.iter().map(|s| s.name()).collect()
    }

    /// The first registered solver.
    pub fn default_solver(&self) -> &dyn ParitySolver {
        self.solvers[0].as_ref()
    }
}

impl Default for SolverRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Zielonka));
        r.register(Box::new(Enumeration));
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_by_name() {
        let r = SolverRegistry::default();
        assert_eq!(r.names(), vec!["zielonka", "enumerate"]);
        assert_eq!(r.default_solver().name(), "zielonka");
        assert!(r.get("enumerate").is_some());
        assert!(r.get("spm").is_none());
    }
}
