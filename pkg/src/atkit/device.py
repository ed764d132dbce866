"""Generation of the pedagogical device: blogs, e-suitcase, toolbox.

The device is materialized as static page trees:

* one blog scaffold per student team (index, progress, one page per
  method step with its delivery checklist, communication page),
* the teacher's e-suitcase (device presentation, adapted method and
  pedagogy presentations, the teacher's own logbook, the resource list,
  and a page linking every team blog),
* a toolbox manifest, one line per embedded tool.

Adaptation happens through directives: ``skip`` removes a topic's
presentation page, ``present`` picks the media modality (text locator
as fallback) and the section ordering, ``embed_tool`` adds toolbox
entries.  Generation is a pure function of its inputs; rendering uses a
single fixed template so output is byte-deterministic.

Output layout (under ``users/<uid>/device/<unit_id>/``)::

    blogs/<team_id>/index.html,progress.html,step-<id>.html,communication.html
    esuitcase/index.html,present-<topic>.html,logbook.html,resources.html,blogs.html
    toolbox.manifest                      # tool | locator | source
"""

from __future__ import annotations

import html
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path, PurePosixPath

from .facts import FactSet
from .profile import TeacherProfile, profile_to_facts
from .resources import config_path, read_records
from .rules import Directive, DirectiveKind, RuleBase, infer
from .scenario import Scenario, Team, compose_scenario, compose_teams
from .units import (
    MethodDefinition,
    Modality,
    Ordering,
    PresentationSection,
    SectionKind,
    TeachingUnit,
)


class DeviceError(ValueError):
    """Generation failed; the message names the failing stage."""


# ---------------------------------------------------------------------------
# Site tree model


@dataclass
class TextItem:
    body: str


@dataclass
class LinkItem:
    label: str
    target: str


@dataclass
class MediaItem:
    modality: Modality
    label: str
    locator: str


PageItem = TextItem | LinkItem | MediaItem


@dataclass
class PageSection:
    heading: str
    items: list[PageItem] = field(default_factory=list)


@dataclass
class Page:
    title: str
    sections: list[PageSection] = field(default_factory=list)


@dataclass
class SiteTree:
    root: str
    pages: dict[str, Page] = field(default_factory=dict)
    external_locators: set[str] = field(default_factory=set)

    def links(self):
        for path, page in self.pages.items():
            for section in page.sections:
                for item in section.items:
                    if isinstance(item, LinkItem):
                        yield path, item.target
                    elif isinstance(item, MediaItem):
                        yield path, item.locator


class ToolSource(str, Enum):
    DIRECTIVE = "directive"
    STANDARD = "standard"


@dataclass(frozen=True)
class ToolboxEntry:
    tool: str
    locator: str
    source: ToolSource


@dataclass
class ToolboxManifest:
    entries: list[ToolboxEntry]

    def render(self) -> str:
        lines = [f"{e.tool} | {e.locator} | {e.source.value}" for e in self.entries]
        return "".join(line + "\n" for line in lines)


@dataclass
class DeviceBundle:
    team_blogs: dict[str, SiteTree]
    esuitcase: SiteTree
    toolbox: ToolboxManifest


_SCHEME_RE = re.compile(r"[a-z][a-z0-9+.\-]*:")


def _has_scheme(target: str) -> bool:
    return bool(_SCHEME_RE.match(target))


def validate_tree(tree: SiteTree) -> list[str]:
    """Broken-link report: every link must stay inside the tree, carry a
    URL scheme, or be a registered external locator."""
    problems = []
    for path in tree.pages:
        pure = PurePosixPath(path)
        if pure.is_absolute() or ".." in pure.parts:
            problems.append(f"{tree.root}: illegal page path {path!r}")
    for path, target in tree.links():
        if _has_scheme(target) or target in tree.external_locators:
            continue
        resolved = _resolve_relative(path, target)
        if resolved is None or resolved not in tree.pages:
            problems.append(f"{tree.root}/{path}: dangling link {target!r}")
    return problems


def _resolve_relative(from_path: str, target: str) -> str | None:
    base = PurePosixPath(from_path).parent
    parts: list[str] = list(base.parts)
    for part in PurePosixPath(target).parts:
        if part == "..":
            if not parts:
                return None
            parts.pop()
        elif part != ".":
            parts.append(part)
    return str(PurePosixPath(*parts)) if parts else None


# ---------------------------------------------------------------------------
# Presentation ordering and media selection


def order_presentation(
    sections: list[PresentationSection], ordering: Ordering
) -> list[PresentationSection]:
    """Stable partition: deductive puts principles first, inductive examples."""
    first_kind = (
        SectionKind.PRINCIPLE if ordering is Ordering.DEDUCTIVE else SectionKind.EXAMPLE
    )
    first = [s for s in sections if s.kind is first_kind]
    rest = [s for s in sections if s.kind is not first_kind]
    return first + rest


def pick_media(section: PresentationSection, modality: Modality) -> MediaItem:
    """The directed modality's media reference, text fallback when absent."""
    if modality in section.media:
        return MediaItem(modality, section.section_id, section.media[modality])
    return MediaItem(Modality.TEXT, section.section_id, section.media[Modality.TEXT])


def load_presentations(path: str | Path | None = None) -> dict[str, list[PresentationSection]]:
    """Presentation sections per pedagogy topic (``presentations.lib``)."""
    resolved = config_path("presentations.lib", path)
    library: dict[str, list[PresentationSection]] = {}
    for lineno, fields in read_records(resolved):
        if len(fields) != 4:
            raise DeviceError(
                f"{resolved}:{lineno}: expected 'topic | section | kind | media'"
            )
        topic, section_id, kind_text, media_text = fields
        try:
            kind = SectionKind(kind_text)
        except ValueError:
            raise DeviceError(f"{resolved}:{lineno}: bad section kind {kind_text!r}") from None
        media: dict[Modality, str] = {}
        for item in media_text.split(","):
            item = item.strip()
            if not item:
                continue
            modality_text, sep, locator = item.partition("=")
            if not sep:
                raise DeviceError(f"{resolved}:{lineno}: bad media entry {item!r}")
            media[Modality(modality_text.strip())] = locator.strip()
        if Modality.TEXT not in media:
            raise DeviceError(f"{resolved}:{lineno}: section lacks text fallback")
        library.setdefault(topic, []).append(PresentationSection(section_id, kind, media))
    return library


# ---------------------------------------------------------------------------
# Team blogs


def generate_team_blog(team: Team, scenario: Scenario) -> SiteTree:
    """One team's logbook scaffold: 3 fixed pages plus one per step."""
    step_ids = list(scenario.step_spans)
    tree = SiteTree(root=team.team_id)

    nav = PageSection(
        "Pages",
        [LinkItem("Progress", "progress.html")]
        + [LinkItem(f"Step: {step_id}", f"step-{step_id}.html") for step_id in step_ids]
        + [LinkItem("Communication", "communication.html")],
    )
    tree.pages["index.html"] = Page(
        f"{team.team_id} logbook",
        [
            PageSection(
                "Team",
                [TextItem(f"Group {team.group_index}, {len(team.members)} members.")]
                + [TextItem(member) for member in team.members],
            ),
            nav,
        ],
    )

    tree.pages["progress.html"] = Page(
        f"{team.team_id} progress",
        [
            PageSection(
                "Keep the teacher informed",
                [TextItem("Record what the team achieved in each session.")]
                + [
                    TextItem(f"Session {s.index} ({s.assigned_step}): ...")
                    for s in scenario.sessions
                ],
            ),
            PageSection("Back", [LinkItem("Logbook home", "index.html")]),
        ],
    )

    for step_id in step_ids:
        first, last = scenario.step_spans[step_id]
        sessions = [s for s in scenario.sessions if s.assigned_step == step_id]
        deliveries = [d for s in sessions for d in s.due_deliveries]
        checklist = [TextItem(f"[ ] {d}") for d in deliveries] or [
            TextItem("No deliveries due for this step.")
        ]
        tree.pages[f"step-{step_id}.html"] = Page(
            f"{team.team_id}: step {step_id}",
            [
                PageSection(
                    "Sessions",
                    [TextItem(f"Sessions {first} to {last} ({len(sessions)} sessions).")],
                ),
                PageSection("Delivery checklist", checklist),
                PageSection("Back", [LinkItem("Logbook home", "index.html")]),
            ],
        )

    tree.pages["communication.html"] = Page(
        f"{team.team_id} communication",
        [
            PageSection(
                "Talk to one another",
                [TextItem("Questions, decisions and notes between team members.")],
            ),
            PageSection("Back", [LinkItem("Logbook home", "index.html")]),
        ],
    )
    return tree


# ---------------------------------------------------------------------------
# E-suitcase


def _topic_slug(topic: str) -> str:
    return re.sub(r"[^A-Za-z0-9_\-]", "-", topic)


def generate_esuitcase(
    directives: list[Directive],
    blogs: dict[str, SiteTree],
    method: MethodDefinition,
    unit: TeachingUnit,
    presentations: dict[str, list[PresentationSection]] | None = None,
    scenario: Scenario | None = None,
) -> SiteTree:
    """The teacher's own site: presentations adapted per directive, the
    logbook, resources, and one link to each team blog."""
    if presentations is None:
        presentations = load_presentations()
    skipped = {d.topic for d in directives if d.kind is DirectiveKind.SKIP}
    presents = [
        d
        for d in directives
        if d.kind is DirectiveKind.PRESENT and d.topic not in skipped
    ]

    tree = SiteTree(root="esuitcase")
    present_pages: dict[str, str] = {}
    for directive in sorted(presents, key=lambda d: d.topic):
        topic = directive.topic
        try:
            modality = Modality(directive.modality)
            ordering = Ordering(directive.ordering)
        except ValueError as exc:
            raise DeviceError(f"present({topic}): {exc}") from None
        if topic == method.method_id:
            sections = method.presentation_sections
        else:
            sections = presentations.get(topic, [])
        if not sections:
            raise DeviceError(f"no presentation sections for topic '{topic}'")
        path = f"present-{_topic_slug(topic)}.html"
        if path in present_pages.values():
            raise DeviceError(f"presentation page collision for topic '{topic}'")
        present_pages[topic] = path
        items: list[PageItem] = [
            TextItem(f"Adapted presentation: {modality.value} material, {ordering.value} order.")
        ]
        body = PageSection("Sections", items)
        for section in order_presentation(sections, ordering):
            items.append(pick_media(section, modality))
        tree.pages[path] = Page(
            f"Presentation: {topic}",
            [body, PageSection("Back", [LinkItem("E-suitcase home", "index.html")])],
        )

    overview_items: list[PageItem] = [
        TextItem(f"Teaching unit: {unit.title}"),
        TextItem(f"Domain project: {unit.domain_project}"),
        TextItem(f"Client needs: {unit.client_needs}"),
        TextItem(
            f"{unit.lecture_hours} lecture hours, {unit.practical_hours} practical hours, "
            f"sessions of {unit.session_duration} h."
        ),
        TextItem(f"Method: {method.name}"),
    ]
    if scenario is not None:
        for step_id, (first, last) in scenario.step_spans.items():
            overview_items.append(TextItem(f"Step {step_id}: sessions {first}-{last}"))
        if scenario.unscheduled_hours:
            overview_items.append(
                TextItem(f"Unscheduled remainder: {scenario.unscheduled_hours} h.")
            )
    nav_items: list[PageItem] = [
        LinkItem(f"Presentation: {topic}", path)
        for topic, path in sorted(present_pages.items())
    ]
    nav_items += [
        LinkItem("Teacher logbook", "logbook.html"),
        LinkItem("Pedagogical resources", "resources.html"),
        LinkItem("Team blogs", "blogs.html"),
    ]
    tree.pages["index.html"] = Page(
        f"E-suitcase: {unit.title}",
        [PageSection("The device", overview_items), PageSection("Contents", nav_items)],
    )

    tree.pages["logbook.html"] = Page(
        "Teacher logbook",
        [
            PageSection(
                "Notes",
                [TextItem("Your own record of the unit: absences, feedback, evaluations.")],
            ),
            PageSection("Back", [LinkItem("E-suitcase home", "index.html")]),
        ],
    )

    resource_items: list[PageItem] = [
        LinkItem(r.label, r.locator) for r in unit.resources
    ] or [TextItem("No resources recorded for this unit.")]
    tree.pages["resources.html"] = Page(
        "Pedagogical resources",
        [
            PageSection("Resources", resource_items),
            PageSection("Back", [LinkItem("E-suitcase home", "index.html")]),
        ],
    )

    blog_items: list[PageItem] = []
    for blog_id in sorted(blogs):
        target = f"../blogs/{blog_id}/index.html"
        blog_items.append(LinkItem(f"Blog of {blog_id}", target))
        tree.external_locators.add(target)
    tree.pages["blogs.html"] = Page(
        "Team blogs",
        [
            PageSection("One logbook per team", blog_items or [TextItem("No teams.")]),
            PageSection("Back", [LinkItem("E-suitcase home", "index.html")]),
        ],
    )
    return tree


# ---------------------------------------------------------------------------
# Toolbox


@dataclass(frozen=True)
class CatalogEntry:
    tool: str
    locator: str
    standard: bool


def load_toolbox_catalog(path: str | Path | None = None) -> list[CatalogEntry]:
    resolved = config_path("toolbox.catalog", path)
    entries = []
    for lineno, fields in read_records(resolved):
        if len(fields) != 3 or fields[2] not in ("standard", "optional"):
            raise DeviceError(
                f"{resolved}:{lineno}: expected 'tool | locator | standard|optional'"
            )
        entries.append(CatalogEntry(fields[0], fields[1], fields[2] == "standard"))
    return entries


def generate_toolbox(
    directives: list[Directive],
    profile: TeacherProfile,
    catalog: list[CatalogEntry] | None = None,
) -> ToolboxManifest:
    """Standard tools plus one entry per embed_tool directive.

    Deduplicated by tool id with directive entries winning.  The profile
    itself adds nothing here: tool adaptation flows through directives.
    """
    if catalog is None:
        catalog = load_toolbox_catalog()
    locators = {entry.tool: entry.locator for entry in catalog}
    chosen: dict[str, ToolboxEntry] = {}
    for entry in catalog:
        if entry.standard:
            chosen[entry.tool] = ToolboxEntry(entry.tool, entry.locator, ToolSource.STANDARD)
    for directive in directives:
        if directive.kind is not DirectiveKind.EMBED_TOOL:
            continue
        tool = directive.tool
        chosen[tool] = ToolboxEntry(
            tool, locators.get(tool, f"tool:{tool}"), ToolSource.DIRECTIVE
        )
    return ToolboxManifest([chosen[tool] for tool in sorted(chosen)])


# ---------------------------------------------------------------------------
# Whole-device pipeline


def _stage(name: str):
    class _StageContext:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, DeviceError):
                raise DeviceError(f"stage {name}: {exc}") from exc
            if isinstance(exc, DeviceError) and not str(exc).startswith("stage "):
                raise DeviceError(f"stage {name}: {exc}") from exc
            return False

    return _StageContext()


def compose_all_teams(unit: TeachingUnit) -> list[Team]:
    """Teams for every supervised group, renumbered globally so blog
    directories stay unique (``team-1`` .. ``team-N``)."""
    teams: list[Team] = []
    for group_index, group in enumerate(unit.roster, start=1):
        if group.team_count <= 0:
            continue
        for team in compose_teams(group.members, group.team_count, group_index):
            teams.append(Team(f"team-{len(teams) + 1}", group_index, team.members))
    return teams


def generate_device(
    profile: TeacherProfile,
    unit: TeachingUnit,
    method: MethodDefinition,
    rulebase: RuleBase,
    presentations: dict[str, list[PresentationSection]] | None = None,
    catalog: list[CatalogEntry] | None = None,
) -> DeviceBundle:
    """Run the full pipeline: facts, inference, teams, scenario, pages."""
    with _stage("profile"):
        facts: FactSet = profile_to_facts(profile)
    with _stage("inference"):
        directives = infer(facts, rulebase).directives
    with _stage("teams"):
        teams = compose_all_teams(unit)
        if not teams:
            raise DeviceError("no supervised group: every roster group has team_count 0")
    with _stage("scenario"):
        scenario = compose_scenario(unit, method)
    with _stage("blogs"):
        blogs = {team.team_id: generate_team_blog(team, scenario) for team in teams}
    with _stage("esuitcase"):
        esuitcase = generate_esuitcase(directives, blogs, method, unit, presentations, scenario)
    with _stage("toolbox"):
        toolbox = generate_toolbox(directives, profile, catalog)
    bundle = DeviceBundle(blogs, esuitcase, toolbox)
    problems = validate_bundle(bundle)
    if problems:  # pragma: no cover - generation always produces valid links
        raise DeviceError(f"stage linking: {problems[0]}")
    return bundle


def bundle_files(bundle: DeviceBundle) -> dict[str, str]:
    """Every output file as relative path -> rendered content."""
    files: dict[str, str] = {}
    for blog_id in sorted(bundle.team_blogs):
        tree = bundle.team_blogs[blog_id]
        for path in sorted(tree.pages):
            files[f"blogs/{blog_id}/{path}"] = render_page(tree.pages[path])
    for path in sorted(bundle.esuitcase.pages):
        files[f"esuitcase/{path}"] = render_page(bundle.esuitcase.pages[path])
    files["toolbox.manifest"] = bundle.toolbox.render()
    return files


def validate_bundle(bundle: DeviceBundle) -> list[str]:
    """Link-integrity report across the whole bundle."""
    problems = []
    paths = set(bundle_files(bundle))
    trees = [(f"blogs/{bid}", t) for bid, t in bundle.team_blogs.items()]
    trees.append(("esuitcase", bundle.esuitcase))
    for prefix, tree in trees:
        for page_path, page in tree.pages.items():
            if ".." in PurePosixPath(page_path).parts:
                problems.append(f"{prefix}/{page_path}: page path escapes tree")
        for page_path, target in tree.links():
            if _has_scheme(target):
                continue
            resolved = _resolve_relative(f"{prefix}/{page_path}", target)
            if resolved is None or resolved not in paths:
                problems.append(f"{prefix}/{page_path}: dangling link {target!r}")
    return problems


def write_bundle(bundle: DeviceBundle, root: Path) -> list[Path]:
    """Write the bundle under ``root``; returns the files written."""
    written = []
    for rel_path, content in bundle_files(bundle).items():
        target = root / rel_path
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(content, encoding="utf-8")
        written.append(target)
    return written


# ---------------------------------------------------------------------------
# Rendering


_STANDARD_TEMPLATE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{title}</title>
</head>
<body>
<header><h1>{title}</h1></header>
<main>
{sections}</main>
</body>
</html>
"""

# Theme hook: one shipped look and feel for now; the id keeps the door
# open without committing to a theming system.
THEMES = {"standard": _STANDARD_TEMPLATE}
DEFAULT_THEME = "standard"


def _render_item(item: PageItem) -> str:
    if isinstance(item, TextItem):
        return f"<p>{html.escape(item.body)}</p>"
    if isinstance(item, LinkItem):
        return f'<p><a href="{html.escape(item.target, quote=True)}">{html.escape(item.label)}</a></p>'
    locator = html.escape(item.locator, quote=True)
    label = html.escape(item.label)
    if item.modality is Modality.AUDIO:
        media = f'<audio controls src="{locator}"></audio>'
    elif item.modality is Modality.VIDEO:
        media = f'<video controls src="{locator}"></video>'
    else:
        media = ""
    return (
        f'<figure data-modality="{item.modality.value}">{media}'
        f'<figcaption><a href="{locator}">{label}</a></figcaption></figure>'
    )


def render_page(page: Page, theme_id: str = DEFAULT_THEME) -> str:
    try:
        template = THEMES[theme_id]
    except KeyError:
        raise DeviceError(f"unknown theme: {theme_id!r}") from None
    sections = []
    for section in page.sections:
        items = "\n".join(_render_item(item) for item in section.items)
        sections.append(
            f"<section>\n<h2>{html.escape(section.heading)}</h2>\n{items}\n</section>\n"
        )
    return template.format(title=html.escape(page.title), sections="".join(sections))
