//! Top-down declarative debugging over an execution dependence tree.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::edt::Edt;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Correct,
    Wrong,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "state", content = "rule", rename_all = "snake_case")]
pub enum Status {
    InProgress,
    Blamed(String),
    Exonerated,
}

enum Next {
    Ask(usize),
    Blame(usize),
    Exonerate,
}

#[derive(Clone, Debug, Serialize)]
pub struct DebugSession {
    pub edt: Edt,
    verdicts: BTreeMap<usize, Verdict>,
    status: Status,
}

impl DebugSession {
    pub fn new(edt: Edt) -> Self {
        DebugSession { edt, verdicts: BTreeMap::new(), status: Status::InProgress }
    }

    pub fn status(&self) -> &Status {
        &self.status
    }

    pub fn verdict(&self, node: usize) -> Option<Verdict> {
        self.verdicts.get(&node).copied()
    }

    pub fn verdicts(&self) -> &BTreeMap<usize, Verdict> {
        &self.verdicts
    }

    /// Label of the blamed rule, once the session has found one.
    pub fn blamed(&self) -> Option<&str> {
        match &self.status {
            Status::Blamed(r) => Some(r),
            _ => None,
        }
    }

    /// Descends from the root through wrong nodes; asks the first unanswered
    /// child of the deepest wrong node, or blames it when all children are correct.
    fn walk(&self) -> Next {
        let mut cur = 0;
        loop {
            match self.verdict(cur) {
                None => return Next::Ask(cur),
                Some(Verdict::Correct) => return Next::Exonerate,
                Some(Verdict::Wrong) => {
                    let kids = &self.edt.nodes[cur].children;
                    if let Some(&w) = kids.iter().find(|&&c| self.verdict(c) == Some(Verdict::Wrong)) {
                        cur = w;
                        continue;
                    }
                    return match kids.iter().find(|&&c| self.verdict(c).is_none()) {
                        Some(&c) => Next::Ask(c),
                        None => Next::Blame(cur),
                    };
                }
            }
        }
    }

    pub fn next_question(&self) -> Option<usize> {
        if self.status != Status::InProgress {
            return None;
        }
        match self.walk() {
            Next::Ask(n) => Some(n),
            _ => None,
        }
    }

    pub fn answer(&mut self, node: usize, verdict: Verdict) -> Result<&Status> {
        if self.status != Status::InProgress {
            return Err(Error::SessionClosed);
        }
        if self.edt.node(node).is_none() {
            return Err(Error::UnknownNode(node));
        }
        if self.verdicts.contains_key(&node) {
            return Err(Error::AlreadyAnswered(node));
        }
        self.verdicts.insert(node, verdict);
        self.status = match self.walk() {
            Next::Ask(_) => Status::InProgress,
            Next::Blame(n) => Status::Blamed(self.edt.nodes[n].rule.clone()),
            Next::Exonerate => Status::Exonerated,
        };
        Ok(&self.status)
    }
}
