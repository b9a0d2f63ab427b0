//! Endpoint iterator fed from another thread.
//!
//! The feed side pushes endpoints in sorted order; the iterator side blocks
//! in [`EndpointIterator::is_finished`] until the next endpoint or the end of
//! the stream arrives. [`StreamSourceIterator::poll`] is the non-blocking
//! variant for callers that drive the sweep step by step.

use std::cmp::Ordering;
use std::sync::mpsc::{self, Receiver, Sender, TryRecvError};

use thiserror::Error;

use crate::endpoint::{compare_endpoints, Endpoint};
use crate::iter::EndpointIterator;
use crate::time::TimePoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StreamError<T: TimePoint> {
    #[error("out-of-order endpoint {offending} after {previous}")]
    OutOfOrder { previous: Endpoint<T>, offending: Endpoint<T> },
    #[error("stream consumer has gone away")]
    Disconnected,
}

/// Producer half. Dropping it (or calling [`StreamFeed::finish`]) ends the
/// stream.
#[derive(Debug)]
pub struct StreamFeed<T> {
    tx: Sender<Endpoint<T>>,
    last: Option<Endpoint<T>>,
}

impl<T: TimePoint> StreamFeed<T> {
    /// Delivers the next endpoint. Endpoints must arrive in sorted order.
    pub fn push(&mut self, e: Endpoint<T>) -> Result<(), StreamError<T>> {
        if let Some(prev) = self.last {
            if compare_endpoints(&prev, &e) == Ordering::Greater {
                return Err(StreamError::OutOfOrder { previous: prev, offending: e });
            }
        }
        self.tx.send(e).map_err(|_| StreamError::Disconnected)?;
        self.last = Some(e);
        Ok(())
    }

    pub fn finish(self) {}
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Head<T> {
    Pending,
    Ready(Endpoint<T>),
    Done,
}

/// Result of a non-blocking [`StreamSourceIterator::poll`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamPoll {
    Ready,
    Pending,
    Finished,
}

/// Consumer half; an [`EndpointIterator`] over the fed endpoints.
#[derive(Debug)]
pub struct StreamSourceIterator<T> {
    rx: Receiver<Endpoint<T>>,
    head: Head<T>,
}

/// Creates a connected feed / iterator pair.
pub fn stream_source<T: TimePoint>() -> (StreamFeed<T>, StreamSourceIterator<T>) {
    let (tx, rx) = mpsc::channel();
    (StreamFeed { tx, last: None }, StreamSourceIterator { rx, head: Head::Pending })
}

impl<T: TimePoint> StreamSourceIterator<T> {
    /// Tries to resolve the head without blocking.
    pub fn poll(&mut self) -> StreamPoll {
        if self.head == Head::Pending {
            self.head = match self.rx.try_recv() {
                Ok(e) => Head::Ready(e),
                Err(TryRecvError::Empty) => return StreamPoll::Pending,
                Err(TryRecvError::Disconnected) => Head::Done,
            };
        }
        match self.head {
            Head::Ready(_) => StreamPoll::Ready,
            _ => StreamPoll::Finished,
        }
    }
}

impl<T: TimePoint> EndpointIterator<T> for StreamSourceIterator<T> {
    #[inline]
    fn endpoint(&self) -> Endpoint<T> {
        match self.head {
            Head::Ready(e) => e,
            Head::Pending => panic!("endpoint() called before is_finished() resolved the stream head"),
            Head::Done => panic!("endpoint() called on a finished stream"),
        }
    }

    #[inline]
    fn advance(&mut self) {
        if let Head::Ready(_) = self.head {
            self.head = Head::Pending;
        }
    }

    fn is_finished(&mut self) -> bool {
        if self.head == Head::Pending {
            self.head = match self.rx.recv() {
                Ok(e) => Head::Ready(e),
                Err(_) => Head::Done,
            };
        }
        self.head == Head::Done
    }
}
