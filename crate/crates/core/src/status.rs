use core::fmt;

/// A tracking value: conclusively true, conclusively false, or still open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Status {
    #[default]
    Open,
    False,
    True,
}

impl Status {
    /// `1`, `0` or `-1`.
    pub fn to_i8(self) -> i8 {
        match self {
            Status::True => 1,
            Status::False => 0,
            Status::Open => -1,
        }
    }

    pub fn from_i8(v: i8) -> Option<Status> {
        match v {
            1 => Some(Status::True),
            0 => Some(Status::False),
            -1 => Some(Status::Open),
            _ => None,
        }
    }

    pub fn from_bool(b: bool) -> Status {
        if b {
            Status::True
        } else {
            Status::False
        }
    }

    pub fn is_open(self) -> bool {
        self == Status::Open
    }

    pub fn is_locked(self) -> bool {
        self != Status::Open
    }

    /// `Some(b)` for a locked value.
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Status::True => Some(true),
            Status::False => Some(false),
            Status::Open => None,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_i8())
    }
}
