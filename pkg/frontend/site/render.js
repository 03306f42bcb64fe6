export const DEFAULT_MAX_SOURCE_PANES = 4;
function el(tag, attrs, text) {
    const node = document.createElement(tag);
    for (const [key, value] of Object.entries(attrs))
        node.setAttribute(key, value);
    if (text !== undefined)
        node.textContent = text;
    return node;
}
/**
 * Render the workspace screen: header with the connection dot and task
 * counters, one task at a time with up to N source panes (each in its own
 * language's writing direction), and the target editor in the target
 * language's direction.
 */
export function renderWorkspace(root, state, t) {
    root.textContent = '';
    root.setAttribute('dir', state.uiDirection ?? 'ltr');
    const header = el('header', { class: 'workspace-header' });
    header.appendChild(el('h1', { 'data-testid': 'app-title' }, t('appTitle')));
    header.appendChild(el('span', {
        'data-testid': 'connection-indicator',
        class: state.online ? 'indicator online' : 'indicator offline',
        title: t(state.online ? 'connectionOnline' : 'connectionOffline'),
    }, state.online ? '●' : '○'));
    const counters = el('div', { 'data-testid': 'task-counters', class: 'counters' });
    counters.appendChild(el('span', { 'data-testid': 'counter-translation' }, t('counterTranslation', {
        open: state.counters.translation.open,
        done: state.counters.translation.completed,
    })));
    counters.appendChild(el('span', { 'data-testid': 'counter-copyedit' }, t('counterCopyedit', {
        open: state.counters.copyedit.open,
        done: state.counters.copyedit.completed,
    })));
    if (state.pendingUploads > 0) {
        counters.appendChild(el('span', { 'data-testid': 'pending-uploads' }, t('pendingUploads', { count: state.pendingUploads })));
    }
    header.appendChild(counters);
    root.appendChild(header);
    for (const notice of state.notices) {
        root.appendChild(el('div', { class: 'banner', 'data-testid': 'notice' }, t(notice.key, notice.params)));
    }
    const item = state.item;
    if (!item) {
        root.appendChild(el('p', { 'data-testid': 'empty-state' }, t('emptyState')));
        return;
    }
    const main = el('main', { 'data-testid': 'task', 'data-task-id': item.task.taskId });
    main.appendChild(el('h2', { 'data-testid': 'task-heading' }, t(item.task.type === 'translation' ? 'taskHeadingTranslation' : 'taskHeadingCopyedit', {
        round: item.task.round,
    })));
    const paneLimit = state.maxSourcePanes ?? DEFAULT_MAX_SOURCE_PANES;
    const sources = el('section', { 'data-testid': 'source-panes' });
    for (const pane of item.sources.slice(0, paneLimit)) {
        const block = el('article', {
            class: 'source-pane',
            'data-testid': 'source-pane',
            'data-language': pane.language,
            dir: pane.direction,
        });
        block.appendChild(el('h3', {}, pane.language));
        block.appendChild(el('p', {}, pane.text));
        sources.appendChild(block);
    }
    main.appendChild(sources);
    const editor = el('textarea', {
        'data-testid': 'target-editor',
        dir: item.targetLanguage.direction,
        lang: item.targetLanguage.code ?? '',
        'aria-label': t('editorLabel'),
    });
    if (item.seedText !== null)
        editor.value = item.seedText;
    main.appendChild(editor);
    const controls = el('div', { class: 'controls' });
    controls.appendChild(el('button', { 'data-testid': 'submit-button', class: 'submit' }, t('submitButton')));
    controls.appendChild(el('button', { 'data-testid': 'skip-button', class: 'skip' }, t('skipButton')));
    controls.appendChild(el('button', { 'data-testid': 'undo-button', class: 'undo' }, t('undoButton')));
    main.appendChild(controls);
    root.appendChild(main);
}
