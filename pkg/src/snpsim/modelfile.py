"""Plain-text model files: a persistent, versioned form of a system.

Round-trip stable: ``parse_model(serialize_model(s))`` equals ``s`` exactly
(on a validated system).  Neuron indices are 1-based on disk to match the
usual table conventions; they are 0-based in memory.

Example::

    snp 1
    neurons 3
    spikes 2 0 0
    rule 1 ge 1 1 1 0
    rule 2 eq 2 2 0 0
    synapse 1 2
    synapse 1 3
    output 3

``rule`` fields: owner, condition kind (``ge`` = at least, ``eq`` =
exactly), threshold, consumed, produced, delay.  Blank lines and ``#``
comments are ignored.
"""

from __future__ import annotations

from .model import ModelError, RegexKind, SNPSystem, SpikeRegex

FORMAT_NAME = "snp"
FORMAT_VERSION = 1

_KIND_TO_TOKEN = {RegexKind.AT_LEAST: "ge", RegexKind.EXACTLY: "eq"}
_TOKEN_TO_KIND = {"ge": RegexKind.AT_LEAST, "eq": RegexKind.EXACTLY}


class ModelFileError(ModelError):
    """The text is not a well-formed model file."""


def serialize_model(system: SNPSystem) -> str:
    """Render a validated system as model-file text."""
    system.ensure_validated()
    lines = [f"{FORMAT_NAME} {FORMAT_VERSION}"]
    lines.append(f"neurons {system.neuron_count}")
    spikes = " ".join(str(v) for v in system.initial_spikes)
    lines.append(f"spikes {spikes}" if spikes else "spikes")
    for rule in system.rules:
        lines.append(
            f"rule {rule.neuron + 1} {_KIND_TO_TOKEN[rule.regex.kind]} "
            f"{rule.regex.threshold} {rule.consumed} {rule.produced} {rule.delay}"
        )
    for src, dst in sorted(system.synapses):
        lines.append(f"synapse {src + 1} {dst + 1}")
    if system.output_neuron is not None:
        lines.append(f"output {system.output_neuron + 1}")
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> SNPSystem:
    """Parse model-file text into a validated system.

    Raises :class:`ModelFileError` for malformed text; semantic violations
    (bad rules, reflexive synapses, ...) raise their usual model errors.
    """
    system = SNPSystem()
    header_seen = False
    neuron_count: int | None = None
    spikes_seen = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword, args = tokens[0], tokens[1:]

        if not header_seen:
            if keyword != FORMAT_NAME:
                raise ModelFileError(
                    f"line {lineno}: expected '{FORMAT_NAME} <version>' header, got {raw!r}"
                )
            version = _int(args, 0, lineno, "format version")
            if version != FORMAT_VERSION:
                raise ModelFileError(
                    f"line {lineno}: unsupported format version {version}"
                )
            header_seen = True
            continue

        if keyword == "neurons":
            if neuron_count is not None:
                raise ModelFileError(f"line {lineno}: duplicate 'neurons' line")
            neuron_count = _int(args, 0, lineno, "neuron count")
            if neuron_count < 0:
                raise ModelFileError(f"line {lineno}: neuron count must be >= 0")
        elif keyword == "spikes":
            if neuron_count is None:
                raise ModelFileError(f"line {lineno}: 'spikes' before 'neurons'")
            if spikes_seen:
                raise ModelFileError(f"line {lineno}: duplicate 'spikes' line")
            if len(args) != neuron_count:
                raise ModelFileError(
                    f"line {lineno}: expected {neuron_count} spike counts, got {len(args)}"
                )
            for pos in range(neuron_count):
                system.add_neuron(_int(args, pos, lineno, "spike count"))
            spikes_seen = True
        elif keyword == "rule":
            _need_spikes(spikes_seen, lineno)
            if len(args) != 6:
                raise ModelFileError(
                    f"line {lineno}: 'rule' needs 6 fields, got {len(args)}"
                )
            kind = _TOKEN_TO_KIND.get(args[1])
            if kind is None:
                raise ModelFileError(
                    f"line {lineno}: condition kind must be 'ge' or 'eq', got {args[1]!r}"
                )
            system.add_rule(
                _index(args, 0, lineno, neuron_count),
                SpikeRegex(kind, _int(args, 2, lineno, "threshold")),
                _int(args, 3, lineno, "consumed"),
                _int(args, 4, lineno, "produced"),
                _int(args, 5, lineno, "delay"),
            )
        elif keyword == "synapse":
            _need_spikes(spikes_seen, lineno)
            if len(args) != 2:
                raise ModelFileError(f"line {lineno}: 'synapse' needs 2 fields")
            system.add_synapse(
                _index(args, 0, lineno, neuron_count),
                _index(args, 1, lineno, neuron_count),
            )
        elif keyword == "output":
            _need_spikes(spikes_seen, lineno)
            system.output_neuron = _index(args, 0, lineno, neuron_count)
        else:
            raise ModelFileError(f"line {lineno}: unknown directive {keyword!r}")

    if not header_seen:
        raise ModelFileError("empty model file")
    if neuron_count is None or not spikes_seen:
        raise ModelFileError("model file is missing 'neurons' or 'spikes'")
    return system.validate()


def _need_spikes(spikes_seen: bool, lineno: int) -> None:
    if not spikes_seen:
        raise ModelFileError(f"line {lineno}: directive before 'spikes' line")


def _int(args: list[str], pos: int, lineno: int, what: str) -> int:
    if pos >= len(args):
        raise ModelFileError(f"line {lineno}: missing {what}")
    try:
        return int(args[pos])
    except ValueError:
        raise ModelFileError(
            f"line {lineno}: {what} must be an integer, got {args[pos]!r}"
        ) from None


def _index(args: list[str], pos: int, lineno: int, neuron_count: int) -> int:
    value = _int(args, pos, lineno, "neuron index")
    if not (1 <= value <= neuron_count):
        raise ModelFileError(
            f"line {lineno}: neuron index {value} out of range 1..{neuron_count}"
        )
    return value - 1
