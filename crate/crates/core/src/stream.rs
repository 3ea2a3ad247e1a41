//! Prefix-query access to the stream named by a description.
//!
//! A [`StreamHandle`] is a node over a shared [`Trace`]. Reads that reach the
//! root description are appended to the trace log and charged against its
//! step budget; derived streams (images under a reduction, shifts) compute
//! their values from the root and so are charged for what they read.

use crate::error::{Error, Result};
use crate::instance::{Instance, Value};
use crate::reduction::Reduction;
use num_rational::BigRational;
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

/// Query log and budget shared by every handle derived from one root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub log: Vec<(u64, Value)>,
    pub budget: u64,
}

enum Node {
    Desc(Arc<Instance>),
    Image {
        red: Arc<dyn Reduction>,
        inner: StreamHandle,
        memo: RefCell<Vec<Value>>,
    },
    Shift {
        inner: StreamHandle,
        by: u64,
    },
    Memo {
        inner: StreamHandle,
        cache: RefCell<HashMap<u64, Value>>,
    },
}

/// A handle onto an infinite name. Cloning shares the node and the trace.
#[derive(Clone)]
pub struct StreamHandle {
    node: Rc<Node>,
    trace: Rc<RefCell<Trace>>,
}

impl StreamHandle {
    pub fn new(desc: Arc<Instance>, budget: u64) -> Self {
        StreamHandle {
            node: Rc::new(Node::Desc(desc)),
            trace: Rc::new(RefCell::new(Trace {
                log: Vec::new(),
                budget,
            })),
        }
    }

    pub fn of(desc: &Instance, budget: u64) -> Self {
        Self::new(Arc::new(desc.clone()), budget)
    }

    /// The stream `red(self)`, computed lazily from this handle.
    pub fn image(&self, red: Arc<dyn Reduction>) -> Self {
        StreamHandle {
            node: Rc::new(Node::Image {
                red,
                inner: self.clone(),
                memo: RefCell::new(Vec::new()),
            }),
            trace: self.trace.clone(),
        }
    }

    /// The stream `i -> self(i + by)`.
    pub fn shift(&self, by: u64) -> Self {
        StreamHandle {
            node: Rc::new(Node::Shift { inner: self.clone(), by }),
            trace: self.trace.clone(),
        }
    }

    /// A view that remembers what it has read, so repeated queries at the
    /// same position reach the root once.
    pub fn memoized(&self) -> Self {
        StreamHandle {
            node: Rc::new(Node::Memo {
                inner: self.clone(),
                cache: RefCell::new(HashMap::new()),
            }),
            trace: self.trace.clone(),
        }
    }

    pub fn get(&self, i: u64) -> Result<Value> {
        match &*self.node {
            Node::Desc(d) => {
                let mut t = self.trace.borrow_mut();
                if t.log.len() as u64 >= t.budget {
                    return Err(Error::Divergence { budget: t.budget });
                }
                let v = d.value_at(i)?;
                t.log.push((i, v.clone()));
                Ok(v)
            }
            Node::Shift { inner, by } => inner.get(i + by),
            Node::Memo { inner, cache } => {
                if let Some(v) = cache.borrow().get(&i) {
                    return Ok(v.clone());
                }
                let v = inner.get(i)?;
                cache.borrow_mut().insert(i, v.clone());
                Ok(v)
            }
            Node::Image { red, inner, memo } => {
                if let Some(v) = memo.borrow().get(i as usize) {
                    return Ok(v.clone());
                }
                let have = memo.borrow().len() as u64;
                let want = (i + 1).max(2 * have);
                let values = red.image_prefix(inner, want)?;
                let v = values[i as usize].clone();
                *memo.borrow_mut() = values;
                Ok(v)
            }
        }
    }

    pub fn nat(&self, i: u64) -> Result<u64> {
        match self.get(i)? {
            Value::Nat(n) => Ok(n),
            Value::Rat(q) => Err(Error::MalformedStream {
                index: i,
                detail: format!("expected a natural, read {q}"),
            }),
        }
    }

    pub fn rat(&self, i: u64) -> Result<BigRational> {
        match self.get(i)? {
            Value::Rat(q) => Ok(q),
            Value::Nat(n) => Err(Error::MalformedStream {
                index: i,
                detail: format!("expected a rational, read {n}"),
            }),
        }
    }

    pub fn flag(&self, i: u64) -> Result<bool> {
        Ok(self.nat(i)? != 0)
    }

    pub fn prefix(&self, len: u64) -> Result<Vec<Value>> {
        (0..len).map(|i| self.get(i)).collect()
    }

    pub fn log(&self) -> Vec<(u64, Value)> {
        self.trace.borrow().log.clone()
    }

    pub fn steps(&self) -> u64 {
        self.trace.borrow().log.len() as u64
    }

    pub fn budget(&self) -> u64 {
        self.trace.borrow().budget
    }
}

/// Default budget for horizon `h`: `10 * h * (universe + 1)`.
pub fn default_budget(horizon: u64, universe: u64) -> u64 {
    10u64
        .saturating_mul(horizon.max(1))
        .saturating_mul(universe.saturating_add(1))
}
