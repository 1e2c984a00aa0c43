//! Random well-typed processes, for property tests and refutation contexts.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{BaseType, Channel, Expr, Process, Selector, SessionType, Value};
use crate::typecheck::InterfacePair;

/// A process `P` with `⊢ P ▷ iface.left ; iface.right`, deterministic in
/// `seed`. `budget` bounds the number of randomly chosen constructs; once it
/// is spent the remaining protocol is inhabited by straight-line code.
pub fn generate_typed(iface: &InterfacePair, seed: u64, budget: usize) -> Process {
    Gen::new(seed, budget, None).gen(&mut Vec::new(), &iface.left, &iface.right)
}

/// Like [`generate_typed`], but when `fault` names a channel some
/// conditional branches end with an unmatched `fault!(false)` instead of
/// terminating, and guards test received values against small literals.
/// Such contexts are typed except for the injected actions, which is what
/// lets them observe a process: a well-typed closed context is always
/// correct.
pub fn generate_context(
    iface: &InterfacePair,
    seed: u64,
    budget: usize,
    fault: Option<Channel>,
) -> Process {
    Gen::new(seed, budget, fault).gen(&mut Vec::new(), &iface.left, &iface.right)
}

struct Gen {
    rng: ChaCha8Rng,
    budget: usize,
    fault: Option<Channel>,
    names: usize,
}

#[derive(Clone, Copy)]
enum Move {
    Idle,
    Act(Channel),
    Cond,
    Split,
}

impl Gen {
    fn new(seed: u64, budget: usize, fault: Option<Channel>) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            budget,
            fault,
            names: 0,
        }
    }

    fn fresh(&mut self) -> String {
        self.names += 1;
        format!("x{}", self.names)
    }

    fn gen(&mut self, env: &mut Vec<(String, BaseType)>, left: &SessionType, right: &SessionType) -> Process {
        if self.budget == 0 {
            return self.inhabit(env, left, right);
        }
        self.budget -= 1;
        let mut moves = Vec::new();
        if *left == SessionType::End && *right == SessionType::End {
            moves.push(Move::Idle);
        }
        for (chan, ty) in [(Channel::L, left), (Channel::R, right)] {
            if *ty != SessionType::End {
                moves.extend([Move::Act(chan), Move::Act(chan), Move::Act(chan)]);
            }
        }
        if self.budget > 2 {
            moves.push(Move::Cond);
        }
        if self.budget > 4 {
            moves.extend([Move::Split, Move::Split, Move::Split]);
        }
        let choice = *moves.choose(&mut self.rng).expect("at least one move applies");
        match choice {
            Move::Idle => Process::Idle,
            Move::Act(chan) => self.act(env, chan, left, right),
            Move::Cond => {
                let guard = self.guard(env);
                let mut then = self.gen(env, left, right);
                let mut els = self.gen(env, left, right);
                if let Some(ch) = self.fault {
                    match self.rng.gen_range(0..3) {
                        0 => then = inject(&then, ch),
                        1 => els = inject(&els, ch),
                        _ => {}
                    }
                }
                Process::cond(guard, then, els)
            }
            Move::Split => {
                let size = self.rng.gen_range(1..=4);
                let mid = random_type(&mut self.rng, size);
                let a = self.gen(env, left, &mid);
                let b = self.gen(env, &mid.dual(), right);
                Process::par(a, b)
            }
        }
    }

    /// Performs the head action of the component on `chan`.
    fn act(
        &mut self,
        env: &mut Vec<(String, BaseType)>,
        chan: Channel,
        left: &SessionType,
        right: &SessionType,
    ) -> Process {
        let (here, other) = match chan {
            Channel::L => (left, right),
            Channel::R => (right, left),
        };
        let pair = |k: &SessionType| match chan {
            Channel::L => (k.clone(), other.clone()),
            Channel::R => (other.clone(), k.clone()),
        };
        match here {
            SessionType::End => unreachable!("no action on a terminated channel"),
            SessionType::Out(t, k) => {
                let e = self.expr(env, *t);
                let (l, r) = pair(k);
                Process::output(chan, e, self.gen(env, &l, &r))
            }
            SessionType::In(t, k) => {
                let x = self.fresh();
                let (l, r) = pair(k);
                env.push((x.clone(), *t));
                let cont = self.gen(env, &l, &r);
                env.pop();
                Process::input(chan, x, *t, cont)
            }
            SessionType::Select(a, b) => {
                let (sel, k) = if self.rng.gen_bool(0.5) {
                    (Selector::Inl, a)
                } else {
                    (Selector::Inr, b)
                };
                let (l, r) = pair(k);
                Process::select(chan, sel, self.gen(env, &l, &r))
            }
            SessionType::Branch(a, b) => {
                let (l1, r1) = pair(a);
                let p = self.gen(env, &l1, &r1);
                let (l2, r2) = pair(b);
                let q = self.gen(env, &l2, &r2);
                Process::branch(chan, p, q)
            }
        }
    }

    /// Straight-line inhabitant: the left protocol first, then the right.
    fn inhabit(&mut self, env: &mut Vec<(String, BaseType)>, left: &SessionType, right: &SessionType) -> Process {
        let chan = match (left, right) {
            (SessionType::End, SessionType::End) => return Process::Idle,
            (SessionType::End, _) => Channel::R,
            _ => Channel::L,
        };
        let (here, other) = match chan {
            Channel::L => (left, right),
            Channel::R => (right, left),
        };
        let pair = |k: &SessionType| match chan {
            Channel::L => (k.clone(), other.clone()),
            Channel::R => (other.clone(), k.clone()),
        };
        match here {
            SessionType::End => unreachable!(),
            SessionType::Out(t, k) => {
                let e = match env.iter().rev().find(|(_, ty)| ty == t) {
                    Some((x, _)) => Expr::var(x.clone()),
                    None => Expr::Lit(Value::default_of(*t)),
                };
                let (l, r) = pair(k);
                Process::output(chan, e, self.inhabit(env, &l, &r))
            }
            SessionType::In(t, k) => {
                let x = self.fresh();
                let (l, r) = pair(k);
                env.push((x.clone(), *t));
                let cont = self.inhabit(env, &l, &r);
                env.pop();
                Process::input(chan, x, *t, cont)
            }
            SessionType::Select(a, _) => {
                let (l, r) = pair(a);
                Process::select(chan, Selector::Inl, self.inhabit(env, &l, &r))
            }
            SessionType::Branch(a, b) => {
                let (l1, r1) = pair(a);
                let p = self.inhabit(env, &l1, &r1);
                let (l2, r2) = pair(b);
                let q = self.inhabit(env, &l2, &r2);
                Process::branch(chan, p, q)
            }
        }
    }

    fn literal(&mut self, t: BaseType) -> Expr {
        match t {
            BaseType::Unit => Expr::unit(),
            BaseType::Bool => Expr::bool(self.rng.gen_bool(0.5)),
            BaseType::Int if self.fault.is_some() => Expr::int(self.rng.gen_range(0..3)),
            BaseType::Int => Expr::int(self.rng.gen_range(-5..=5)),
        }
    }

    fn pick_var(&mut self, env: &[(String, BaseType)], t: BaseType) -> Option<Expr> {
        let vars: Vec<&String> = env.iter().filter(|(_, ty)| *ty == t).map(|(x, _)| x).collect();
        vars.choose(&mut self.rng).map(|x| Expr::var((*x).clone()))
    }

    fn expr(&mut self, env: &[(String, BaseType)], t: BaseType) -> Expr {
        match self.rng.gen_range(0..4) {
            0 | 1 => self.pick_var(env, t).unwrap_or_else(|| self.literal(t)),
            2 if t == BaseType::Int => {
                let base = self.pick_var(env, t).unwrap_or_else(|| self.literal(t));
                Expr::add(base, Expr::int(self.rng.gen_range(0..3)))
            }
            2 if t == BaseType::Bool => self.guard(env),
            _ => self.literal(t),
        }
    }

    fn guard(&mut self, env: &[(String, BaseType)]) -> Expr {
        let received: Vec<(String, BaseType)> = env
            .iter()
            .filter(|(_, t)| *t != BaseType::Unit)
            .cloned()
            .collect();
        if let Some((x, t)) = received.choose(&mut self.rng).cloned() {
            if self.fault.is_some() || self.rng.gen_bool(0.5) {
                let lit = self.literal(t);
                return Expr::eq(Expr::var(x), lit);
            }
        }
        match self.rng.gen_range(0..3) {
            0 => self.literal(BaseType::Bool),
            1 => Expr::eq(self.literal(BaseType::Int), self.literal(BaseType::Int)),
            _ => self.pick_var(env, BaseType::Bool).unwrap_or(Expr::bool(true)),
        }
    }
}

/// Replaces terminations outside nested compositions by `chan!(false).0`.
fn inject(p: &Process, chan: Channel) -> Process {
    match p {
        Process::Idle => Process::output(chan, Expr::bool(false), Process::Idle),
        Process::Par(..) => p.clone(),
        Process::Input { chan: c, var, ty, cont } => Process::input(*c, var.clone(), *ty, inject(cont, chan)),
        Process::Output { chan: c, expr, cont } => Process::output(*c, expr.clone(), inject(cont, chan)),
        Process::Select { chan: c, sel, cont } => Process::select(*c, *sel, inject(cont, chan)),
        Process::Branch { chan: c, inl, inr } => Process::branch(*c, inject(inl, chan), inject(inr, chan)),
        Process::Cond { guard, then, els } => Process::cond(guard.clone(), inject(then, chan), inject(els, chan)),
    }
}

/// A random session type with about `size` nodes.
pub(crate) fn random_type(rng: &mut impl Rng, size: usize) -> SessionType {
    if size <= 1 {
        return SessionType::End;
    }
    let base = *BaseType::ALL.choose(rng).expect("nonempty");
    match rng.gen_range(0..4) {
        0 => SessionType::out(base, random_type(rng, size - 1)),
        1 => SessionType::inp(base, random_type(rng, size - 1)),
        k if size >= 3 => {
            let left = rng.gen_range(1..size - 1);
            let (a, b) = (random_type(rng, left), random_type(rng, size - 1 - left));
            if k == 2 {
                SessionType::select(a, b)
            } else {
                SessionType::branch(a, b)
            }
        }
        _ => SessionType::out(base, random_type(rng, size - 1)),
    }
}
