// Contract tests against recorded interview-service responses: everything on
// screen must originate from the API payloads, never from client-side logic.

import { describe, expect, it } from 'vitest';

import {
  annotateEntities,
  renderHistory,
  renderModelIndex,
  renderQuestion,
  renderReport,
} from '../src/ui';
import type { ModelIndexEntry, SessionState } from '../src/types';

import sessionCreate from './fixtures/session-create.json';
import pathNoNoNo from './fixtures/path-no-no-no.json';
import pathYesNoNo from './fixtures/path-yes-no-no.json';
import pathNoYes from './fixtures/path-no-yes.json';
import modelsIndex from './fixtures/models-index.json';

const createFixture = sessionCreate as unknown as SessionState;
const noNoNo = pathNoNoNo as unknown as SessionState[];
const yesNoNo = pathYesNoNo as unknown as SessionState[];
const noYes = pathNoYes as unknown as SessionState[];

function last(steps: SessionState[]): SessionState {
  return steps[steps.length - 1];
}

describe('question screen', () => {
  it('renders the recorded question text and answer buttons', () => {
    const prompt = createFixture.prompt!;
    const card = renderQuestion(prompt, false, () => {});
    expect(card.querySelector('.question-text')?.textContent).toBe(
      'Did you get a hearing prior to being fired?',
    );
    const buttons = [...card.querySelectorAll<HTMLButtonElement>('.answer-btn')];
    expect(buttons.map((b) => b.dataset.key)).toEqual(['yes', 'no']);
    expect(buttons.map((b) => b.textContent)).toEqual(['Yes', 'No']);
  });

  it('renders the elaboration as an expandable block', () => {
    const card = renderQuestion(createFixture.prompt!, false, () => {});
    const details = card.querySelector('details.elaboration');
    expect(details?.textContent).toContain('A hearing is a meeting');
  });

  it('disables answers while a request is in flight', () => {
    const card = renderQuestion(createFixture.prompt!, true, () => {});
    for (const button of card.querySelectorAll<HTMLButtonElement>('.answer-btn')) {
      expect(button.disabled).toBe(true);
    }
  });

  it('invokes the handler with the canonical answer key', () => {
    const picked: string[] = [];
    const card = renderQuestion(createFixture.prompt!, false, (key) => picked.push(key));
    card.querySelector<HTMLButtonElement>('.answer-btn[data-key="no"]')!.click();
    expect(picked).toEqual(['no']);
  });

  it('wraps entity terms from the payload in tooltip spans', () => {
    const fragment = annotateEntities('Does the Aid plan apply to you?', {
      'Aid plan': 'The aid plan tier the worker may join.',
    });
    const host = document.createElement('div');
    host.append(fragment);
    const span = host.querySelector('span.entity');
    expect(span?.textContent).toBe('Aid plan');
    expect(span?.getAttribute('data-tooltip')).toContain('aid plan tier');
  });
});

describe('report screens for the three recorded paths', () => {
  it('[no,no,no] shows the flawed outcome section', () => {
    const report = last(noNoNo).report!;
    const card = renderReport(report);
    const fairness = card.querySelector('[data-path="Root/ProcessFairness"]');
    expect(fairness?.querySelector('h2')?.textContent).toBe('Process fairness');
    expect(fairness?.textContent).toContain('Flawed process');
    const plan = card.querySelector('[data-path="Root/Plan"]');
    expect(plan?.textContent).toContain('Plan L1');
  });

  it('[yes,no,no] shows the fair outcome', () => {
    const card = renderReport(last(yesNoNo).report!);
    expect(card.querySelector('[data-path="Root/ProcessFairness"]')?.textContent).toContain(
      'Fair process',
    );
    expect(card.querySelector('[data-path="Root/Recommendations"]')).toBeNull();
  });

  it('[no,yes] shows the illegal outcome with one recommendation', () => {
    const card = renderReport(last(noYes).report!);
    expect(card.querySelector('[data-path="Root/ProcessFairness"]')?.textContent).toContain(
      'Illegal process',
    );
    const recs = card.querySelector('[data-path="Root/Recommendations"]');
    const values = [...recs!.querySelectorAll('.report-value')];
    expect(values).toHaveLength(1);
    expect(values[0].textContent).toContain('Consider suing your former employer soon');
  });

  it('long explanations render as expandable read-more blocks', () => {
    const card = renderReport(last(noYes).report!);
    const detail = card.querySelector('[data-path="Root/ProcessFairness"] details.long-text');
    expect(detail?.textContent).toContain('labor court');
  });

  it('sections follow the server-provided slot-tree order', () => {
    const card = renderReport(last(noYes).report!);
    const paths = [...card.querySelectorAll('.report-section')].map((s) =>
      s.getAttribute('data-path'),
    );
    expect(paths).toEqual(['Root/ProcessFairness', 'Root/Recommendations', 'Root/Plan']);
  });
});

describe('history strip', () => {
  it('lists answered questions with their display texts', () => {
    const transcript = last(noNoNo).transcript;
    const strip = renderHistory(transcript, null, false, () => {}, () => {});
    const items = [...strip.querySelectorAll('.history-item')];
    expect(items).toHaveLength(3);
    expect(items[0].textContent).toContain('Did you get a hearing prior to being fired?');
    expect(items[0].textContent).toContain('No');
  });

  it('opens an answer picker with the alternatives from the payload', () => {
    const transcript = last(noNoNo).transcript;
    const strip = renderHistory(transcript, 0, false, () => {}, () => {});
    const options = [...strip.querySelectorAll<HTMLButtonElement>('.revise-btn')];
    expect(options.map((o) => o.dataset.key)).toEqual(['yes', 'no']);
    // the already-given answer is not re-submittable
    expect(options.find((o) => o.dataset.key === 'no')?.disabled).toBe(true);
    expect(options.find((o) => o.dataset.key === 'yes')?.disabled).toBe(false);
  });

  it('reports the picked revision to the handler', () => {
    const revisions: Array<[number, string]> = [];
    const strip = renderHistory(last(noNoNo).transcript, 0, false, () => {}, (index, key) =>
      revisions.push([index, key]),
    );
    strip.querySelector<HTMLButtonElement>('.revise-btn[data-key="yes"]')!.click();
    expect(revisions).toEqual([[0, 'yes']]);
  });
});

describe('model index', () => {
  it('renders the recorded public model list', () => {
    const models = (modelsIndex as { models: ModelIndexEntry[] }).models;
    const card = renderModelIndex(models, () => {});
    expect(card.textContent).toContain('Job Termination Fairness Demo');
  });
});
