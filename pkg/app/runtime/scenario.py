"""
Scenario scripts replacing the task sequencer.

A script is line oriented; `#` starts a comment:

    10 set ctx_battery=80 ctx_noise=10
    20 query coffee
"""

from dataclasses import dataclass
from pathlib import Path

from core.exceptions import ScriptError


@dataclass(frozen=True)
class ScenarioEntry:
    """A `set` (with `assignments`) or a `query` (with `model`)."""

    tick: int
    line: int
    assignments: tuple = ()
    model: str = None

    @property
    def is_query(self):
        return self.model is not None


@dataclass(frozen=True)
class ScenarioScript:
    entries: tuple = ()

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def _entry(number, words):
    try:
        tick = int(words[0])
    except ValueError:
        raise ScriptError(
            number, f'Expected a tick, got {words[0]!r}.') from None
    if tick < 0:
        raise ScriptError(number, 'Ticks cannot be negative.')
    verb, arguments = (words[1], words[2:]) if len(words) > 1 else (None, [])
    if verb == 'query':
        if len(arguments) != 1:
            raise ScriptError(number, 'query takes exactly one model name.')
        return ScenarioEntry(tick, number, model=arguments[0])
    if verb == 'set':
        if not arguments:
            raise ScriptError(number, 'set needs at least one name=value.')
        assignments = []
        for argument in arguments:
            name, sign, value = argument.partition('=')
            if not sign or not name or not value:
                raise ScriptError(
                    number, f'Expected name=value, got {argument!r}.')
            assignments.append((name, value))
        return ScenarioEntry(tick, number, tuple(assignments))
    raise ScriptError(number, f'Expected set or query, got {verb!r}.')


def parse_script(text):
    """Read a scenario; raises ScriptError on malformed lines."""
    entries = []
    for number, raw in enumerate(text.splitlines(), 1):
        words = raw.split('#', 1)[0].split()
        if not words:
            continue
        entry = _entry(number, words)
        if entries and entry.tick < entries[-1].tick:
            raise ScriptError(
                number, f'Tick {entry.tick} comes after tick '
                f'{entries[-1].tick}.')
        entries.append(entry)
    return ScenarioScript(tuple(entries))


def load_script(path):
    return parse_script(Path(path).read_text(encoding='utf-8'))


def run_scenario(engine, script):
    """
    Replay `script` on `engine`; returns the engine's BindingTimeline.

    `set` entries update contexts (firing push re-solves), `query`
    entries solve the named model.
    """
    for entry in script:
        engine.tick = entry.tick
        if entry.is_query:
            if entry.model not in engine.pipeline.models:
                raise ScriptError(entry.line,
                                  f'Unknown model {entry.model!r}.')
            engine.trigger_query(entry.model)
            continue
        for name, value in entry.assignments:
            engine.update_context(name, value)
    return engine.timeline
