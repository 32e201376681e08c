# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
'''
Progress notifications for long sweeps.
'''

# System imports
import typing as T
from types import MethodType
from weakref import ReferenceType, WeakMethod, ref

# Third-party imports
from observable import Observable

# Local imports


#: Events emitted by sweeps.
#: - 'realization': (index, value) after a Monte-Carlo realization completed.
#: - 'resampled': (index, attempt) when a realization had to be drawn again.
#: - 'grid_point': (index, z) after a grid point was evaluated.
EVENTS = ('realization', 'resampled', 'grid_point')


class WeakHandler:
    '''Calls a handler through a weak reference; bound methods are referenced via WeakMethod.'''

    def __init__(
            self, handler: T.Callable, on_collect: T.Optional[T.Callable] = None) -> None:
        self._ref: ReferenceType
        if isinstance(handler, MethodType):
            self._ref = WeakMethod(handler, on_collect)
        else:
            self._ref = ref(handler, on_collect)

    def __call__(self, *args: T.Any, **kwargs: T.Any) -> T.Any:
        handler = self._ref()
        if handler is not None:
            return handler(*args, **kwargs)
        return None

    @property
    def alive(self) -> bool:
        return self._ref() is not None

    def __eq__(self, other: T.Any) -> bool:
        if isinstance(other, WeakHandler):
            return self._ref == other._ref
        if isinstance(other, ref):
            return self._ref == other
        return self._ref() == other

    def __hash__(self) -> int:
        return hash(self._ref)


class ProgressObservable(Observable):
    '''
    Observable for sweep progress.

    Handlers are only weakly referenced: keep a reference to them for as long as they should be
    notified. Unknown event names are refused.
    '''

    def on(  # pylint: disable=invalid-name
            self, event: str, *handlers: T.Callable) -> T.Callable:
        '''Registers handlers to an event. Also usable as a decorator.'''
        if event not in EVENTS:
            raise ValueError(f'Unknown progress event {event!r}, expected one of {EVENTS}')

        def _on_wrapper(*handlers: T.Callable) -> T.Callable:
            registered = self._events.setdefault(event, [])
            for handler in handlers:
                registered.append(WeakHandler(handler, registered.remove))
            return handlers[0]

        if handlers:
            return _on_wrapper(*handlers)
        return _on_wrapper


def notify(observers: T.Optional[ProgressObservable], event: str, *args: T.Any) -> None:
    '''Triggers event on observers when there are any.'''
    if observers is not None:
        observers.trigger(event, *args)
