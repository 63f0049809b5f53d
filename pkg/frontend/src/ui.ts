import type {
  FinalReport,
  ModelIndexEntry,
  PromptPayload,
  ReportValue,
  TranscriptItem,
} from './types';

// DOM builders. Every visible prompt, answer, and report line comes straight
// from an API payload; this module only arranges it.

type Child = Node | string;

export function el(tag: string, attrs: Record<string, string> = {}, children: Child[] = []): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

function escapeRegExp(text: string): string {
  return text.replace(/[.*+?^${}()|[\]\\]/g, '\\$&');
}

/** Wrap occurrences of entity names in tooltip spans. */
export function annotateEntities(
  text: string,
  tooltips: Record<string, string>,
): DocumentFragment {
  const fragment = document.createDocumentFragment();
  const names = Object.keys(tooltips).sort((a, b) => b.length - a.length);
  if (names.length === 0) {
    fragment.append(text);
    return fragment;
  }
  const pattern = new RegExp(`\\b(${names.map(escapeRegExp).join('|')})\\b`, 'gi');
  let last = 0;
  for (const match of text.matchAll(pattern)) {
    const start = match.index ?? 0;
    if (start > last) fragment.append(text.slice(last, start));
    const name = names.find((n) => n.toLowerCase() === match[0].toLowerCase()) ?? match[0];
    const span = el('span', { class: 'entity', 'data-tooltip': tooltips[name] ?? '' }, [match[0]]);
    span.title = tooltips[name] ?? '';
    fragment.append(span);
    last = start + match[0].length;
  }
  if (last < text.length) fragment.append(text.slice(last));
  return fragment;
}

export function renderQuestion(
  prompt: PromptPayload,
  busy: boolean,
  onAnswer: (key: string) => void,
): HTMLElement {
  const card = el('section', { class: 'card question' });
  if (prompt.sectionTitles.length > 0) {
    card.append(el('nav', { class: 'breadcrumbs' }, [prompt.sectionTitles.join(' › ')]));
  }
  const heading = el('h1', { class: 'question-text' });
  heading.append(annotateEntities(prompt.text, prompt.entityTooltips));
  card.append(heading);
  if (prompt.elaboration) {
    card.append(
      el('details', { class: 'elaboration' }, [
        el('summary', {}, ['More about this question']),
        el('p', {}, [prompt.elaboration]),
      ]),
    );
  }
  const answers = el('div', { class: 'answers' });
  for (const key of prompt.answers) {
    const button = el('button', { class: 'answer-btn', 'data-key': key }, [
      prompt.answerTexts[key] ?? key,
    ]) as HTMLButtonElement;
    button.disabled = busy;
    button.addEventListener('click', () => onAnswer(key));
    answers.append(button);
  }
  card.append(answers);
  return card;
}

export function renderHistory(
  transcript: TranscriptItem[],
  revising: number | null,
  busy: boolean,
  onOpen: (index: number | null) => void,
  onRevise: (index: number, key: string) => void,
): HTMLElement {
  const strip = el('section', { class: 'history' });
  const answered = transcript.filter((item) => item.kind === 'answer');
  if (answered.length === 0) return strip;
  strip.append(el('h2', {}, ['Your answers']));
  const list = el('ol', { class: 'history-list' });
  for (const item of answered) {
    const entry = el('li', { class: 'history-item' });
    const toggle = el('button', { class: 'history-btn', 'data-index': String(item.index) }, [
      el('span', { class: 'history-question' }, [item.text ?? item.node]),
      el('span', { class: 'history-answer' }, [item.answerText ?? item.answer ?? '']),
    ]) as HTMLButtonElement;
    toggle.disabled = busy;
    toggle.addEventListener('click', () =>
      onOpen(revising === item.index ? null : item.index),
    );
    entry.append(toggle);
    if (revising === item.index) {
      const picker = el('div', { class: 'revise-picker' });
      for (const key of item.answers ?? []) {
        const option = el(
          'button',
          {
            class: 'answer-btn revise-btn' + (key === item.answer ? ' current' : ''),
            'data-key': key,
          },
          [item.answerTexts?.[key] ?? key],
        ) as HTMLButtonElement;
        option.disabled = busy || key === item.answer;
        option.addEventListener('click', () => onRevise(item.index, key));
        picker.append(option);
      }
      entry.append(picker);
    }
    list.append(entry);
  }
  strip.append(list);
  return strip;
}

function renderValue(value: ReportValue): HTMLElement {
  const item = el('li', { class: 'report-value' });
  const name = el('span', { class: 'value-name' }, [value.name]);
  if (value.tooltip && value.tooltip !== value.name) name.title = value.tooltip;
  item.append(name);
  if (value.tooltip && value.tooltip !== value.name) {
    item.append(el('p', { class: 'value-tooltip' }, [value.tooltip]));
  }
  if (value.longText) {
    item.append(
      el('details', { class: 'long-text' }, [
        el('summary', {}, ['Read more']),
        el('p', {}, [value.longText]),
      ]),
    );
  }
  return item;
}

export function renderReport(report: FinalReport): HTMLElement {
  const card = el('section', { class: 'card report' });
  card.append(el('h1', {}, ['Your results']));
  if (report.entries.length === 0) {
    card.append(el('p', { class: 'report-empty' }, ['The interview recorded no findings.']));
    return card;
  }
  for (const entry of report.entries) {
    const section = el('section', { class: 'report-section', 'data-path': entry.path });
    const heading = el('h2', {}, [entry.name]);
    if (entry.tooltip && entry.tooltip !== entry.name) heading.title = entry.tooltip;
    section.append(heading);
    const values = el('ul', { class: 'report-values' });
    if (entry.kind === 'atomic' && entry.value) {
      values.append(renderValue(entry.value));
    } else if (entry.values) {
      for (const value of entry.values) values.append(renderValue(value));
    }
    section.append(values);
    card.append(section);
  }
  return card;
}

export function renderCommentBox(
  sent: boolean,
  busy: boolean,
  onSubmit: (text: string) => void,
): HTMLElement {
  const box = el('section', { class: 'card comment-box' });
  box.append(el('h2', {}, ['Leave a comment']));
  if (sent) {
    box.append(el('p', { class: 'comment-thanks' }, ['Thanks, your comment was recorded.']));
    return box;
  }
  const input = el('textarea', {
    class: 'comment-input',
    placeholder: 'Something unclear or wrong on this screen? Tell the model team.',
    rows: '3',
  }) as HTMLTextAreaElement;
  const submit = el('button', { class: 'comment-submit' }, ['Send comment']) as HTMLButtonElement;
  submit.disabled = busy;
  submit.addEventListener('click', () => {
    if (input.value.trim()) onSubmit(input.value.trim());
  });
  box.append(input, submit);
  return box;
}

export function renderErrorBanner(message: string, onRetry: (() => void) | null): HTMLElement {
  const banner = el('div', { class: 'banner error-banner', role: 'alert' }, [
    el('span', {}, [message]),
  ]);
  if (onRetry) {
    const retry = el('button', { class: 'retry-btn' }, ['Retry']);
    retry.addEventListener('click', onRetry);
    banner.append(retry);
  }
  return banner;
}

export function renderAccessDenied(): HTMLElement {
  return el('section', { class: 'card access-denied' }, [
    el('h1', {}, ['Access denied']),
    el('p', {}, [
      'This interview version is private. Check that your link is complete and unexpired.',
    ]),
  ]);
}

export function renderModelIndex(
  models: ModelIndexEntry[],
  onPick: (model: ModelIndexEntry) => void,
): HTMLElement {
  const card = el('section', { class: 'card model-index' });
  card.append(el('h1', {}, ['Available interviews']));
  if (models.length === 0) {
    card.append(el('p', {}, ['No public interviews are available right now.']));
    return card;
  }
  const list = el('ul', { class: 'model-list' });
  for (const model of models) {
    const button = el('button', { class: 'answer-btn model-btn' }, [model.title]);
    button.addEventListener('click', () => onPick(model));
    list.append(el('li', {}, [button]));
  }
  card.append(list);
  return card;
}
